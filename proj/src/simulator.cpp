#include "hbmut/simulator.hpp"

#include "hbmut/errors.hpp"
#include "hbmut/random.hpp"
#include "number_format.hpp"
#include "tsv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

namespace hbmut {

namespace {

// Stream ids under the scenario seed.
constexpr std::uint64_t kCoverageStream = 1;
constexpr std::uint64_t kSampleEffectStream = 2;
constexpr std::uint64_t kDriverStream = 3;
constexpr std::uint64_t kCountStream = 4;
constexpr std::uint64_t kSubsampleStream = 5;

void normalize_geometric(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::log(x);
    const double shift = s / static_cast<double>(v.size());
    for (double& x : v) x = std::exp(std::log(x) - shift);
}

char source_base(std::string_view context) {
    // "C_in_CpG" -> C, "Other_G" -> G, "A" -> A
    if (context.rfind("Other_", 0) == 0) return context[6];
    return context.front();
}

bool is_transition(char from, char to) {
    return (from == 'C' && to == 'T') || (from == 'T' && to == 'C') || (from == 'G' && to == 'A') ||
           (from == 'A' && to == 'G');
}

double log_product(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::log(x);
    return s;
}

std::string gene_label(std::size_t i, std::size_t n) {
    std::string digits = std::to_string(i + 1);
    const std::size_t width = std::max<std::size_t>(5, std::to_string(n).size());
    return "G" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

} // namespace

void ScenarioSpec::validate() const {
    const std::size_t G = real_coverage ? (real_genes.empty() ? real_coverage->num_genes() : real_genes.size())
                                        : num_genes;
    const std::size_t M = real_coverage ? real_coverage->num_types() : type_labels.size();
    const std::size_t K = real_coverage ? real_coverage->num_samples() : num_samples;
    if (G == 0) throw UsageError("scenario needs at least one gene");
    if (M == 0 || K == 0) throw UsageError("scenario needs at least one type and one sample");
    if (!(lambda0 > 0.0)) throw UsageError("lambda0 must be > 0");
    double total = 0.0;
    for (const auto& t : tiers) {
        if (!(t.fraction >= 0.0)) throw UsageError("tier fraction must be >= 0");
        if (!(t.multiplier >= 1.0)) throw UsageError("tier multiplier must be >= 1");
        total += t.fraction;
    }
    if (!(total < 1.0)) throw UsageError("tier fractions must sum to less than 1");
    if (!alpha.empty()) {
        if (alpha.size() != M) throw UsageError("alpha has " + std::to_string(alpha.size()) + " entries, expected " +
                                                std::to_string(M));
        if (std::abs(log_product(alpha)) > 1e-10) throw UsageError("product of alpha must be 1");
    }
    if (!beta.empty()) {
        if (beta.size() != K)
            throw UsageError("beta has " + std::to_string(beta.size()) + " entries, expected " + std::to_string(K));
        if (std::abs(log_product(beta)) > 1e-10) throw UsageError("product of beta must be 1");
    }
    for (auto g : real_genes)
        if (!real_coverage || g >= real_coverage->num_genes()) throw UsageError("gene subset outside the coverage");
}

ScenarioSpec default_scenario(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    return spec;
}

ScenarioSpec scenario_from_coverage(std::shared_ptr<const MutationDataset> coverage, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.num_genes = coverage->num_genes();
    spec.num_samples = coverage->num_samples();
    spec.type_labels.clear();
    for (const auto& t : coverage->types()) spec.type_labels.push_back(t.label);
    spec.real_coverage = std::move(coverage);
    return spec;
}

std::vector<double> default_type_effects(const std::vector<std::string>& type_labels) {
    std::vector<double> alpha;
    for (const auto& label : type_labels) {
        const auto arrow = label.find("->");
        if (arrow == std::string::npos) {
            alpha.push_back(0.5);
            continue;
        }
        const std::string_view context(label.data(), arrow);
        const char to = label[arrow + 2];
        const bool transition = is_transition(source_base(context), to);
        const bool cpg = context.find("CpG") != std::string_view::npos;
        alpha.push_back(transition ? (cpg ? 10.0 : 2.0) : 1.0);
    }
    normalize_geometric(alpha);
    return alpha;
}

std::vector<double> lognormal_sample_effects(std::size_t num_samples, double sd, std::uint64_t seed) {
    Rng rng(seed, kSampleEffectStream);
    std::vector<double> beta(num_samples);
    for (auto& b : beta) b = std::exp(rng.normal(0.0, sd));
    normalize_geometric(beta);
    return beta;
}

std::vector<std::size_t> tier_counts(const std::vector<DriverTier>& tiers, std::size_t num_genes) {
    const auto n = tiers.size();
    std::vector<double> quota(n + 1);
    double used = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        quota[i] = tiers[i].fraction * static_cast<double>(num_genes);
        used += tiers[i].fraction;
    }
    quota[n] = (1.0 - used) * static_cast<double>(num_genes);
    std::vector<std::size_t> count(n + 1);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        // Guard against 0.05% * 2000 = 0.99999...
        count[i] = static_cast<std::size_t>(std::floor(quota[i] + 1e-9));
        assigned += count[i];
    }
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    auto remainder = [&](std::size_t i) { return std::max(0.0, quota[i] - static_cast<double>(count[i])); };
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remainder(a) > remainder(b); });
    for (std::size_t j = 0; assigned < num_genes && j < order.size(); ++j, ++assigned) ++count[order[j]];
    count.pop_back();
    return count;
}

ScenarioSpec desk_scale(const ScenarioSpec& spec, std::size_t target_g) {
    const std::size_t G =
        spec.real_coverage ? (spec.real_genes.empty() ? spec.real_coverage->num_genes() : spec.real_genes.size())
                           : spec.num_genes;
    if (target_g > G) throw UsageError("target gene count " + std::to_string(target_g) + " exceeds " + std::to_string(G));
    const auto counts = tier_counts(spec.tiers, target_g);
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (spec.tiers[i].fraction > 0.0 && counts[i] == 0)
            throw UsageError("target gene count " + std::to_string(target_g) + " leaves driver tier " +
                             std::to_string(i + 1) + " empty");
    ScenarioSpec out = spec;
    out.num_genes = target_g;
    if (spec.real_coverage && target_g < G) {
        std::vector<std::uint32_t> pool = spec.real_genes;
        if (pool.empty()) {
            pool.resize(G);
            std::iota(pool.begin(), pool.end(), 0u);
        }
        Rng rng(spec.seed, kSubsampleStream);
        for (std::size_t i = 0; i < target_g; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        pool.resize(target_g);
        std::sort(pool.begin(), pool.end());
        out.real_genes = std::move(pool);
    }
    return out;
}

Simulation generate(const ScenarioSpec& spec) {
    spec.validate();
    struct Cell {
        std::uint32_t gene, type;
        std::int64_t sample;  // -1: every sample
        std::int64_t coverage;
    };
    std::vector<std::string> type_labels;
    std::vector<std::string> sample_labels;
    std::vector<std::string> gene_names;
    std::vector<Cell> cells;

    if (spec.real_coverage) {
        const auto& src = *spec.real_coverage;
        for (const auto& t : src.types()) type_labels.push_back(t.label);
        for (const auto& s : src.samples()) sample_labels.push_back(s.label);
        std::vector<std::uint32_t> genes = spec.real_genes;
        if (genes.empty()) {
            genes.resize(src.num_genes());
            std::iota(genes.begin(), genes.end(), 0u);
        }
        const auto K = src.num_samples();
        for (std::uint32_t i = 0; i < genes.size(); ++i) {
            gene_names.push_back(src.gene_name(genes[i]));
            for (const auto& row : src.gene_rows(genes[i])) {
                const auto members = src.sample_set(row.sample_set);
                if (members.size() == K) {
                    cells.push_back({i, row.type, -1, row.coverage});
                } else {
                    for (auto k : members) cells.push_back({i, row.type, k, row.coverage});
                }
            }
        }
    } else {
        type_labels = spec.type_labels;
        for (std::size_t k = 0; k < spec.num_samples; ++k) sample_labels.push_back("s" + std::to_string(k + 1));
        std::unordered_map<std::string, double> freq(spec.synthetic.context_frequencies.begin(),
                                                     spec.synthetic.context_frequencies.end());
        std::vector<double> share(type_labels.size());
        for (std::size_t m = 0; m < type_labels.size(); ++m) {
            const auto& label = type_labels[m];
            const auto arrow = label.find("->");
            if (arrow == std::string::npos) {
                share[m] = -1.0;  // length
                continue;
            }
            auto it = freq.find(label.substr(0, arrow));
            if (it == freq.end()) throw UsageError("no context frequency for type '" + label + "'");
            share[m] = it->second * spec.synthetic.nonsynonymous_fraction;
        }
        Rng rng(spec.seed, kCoverageStream);
        const double mu = std::log(spec.synthetic.median_length);
        for (std::uint32_t g = 0; g < spec.num_genes; ++g) {
            gene_names.push_back(gene_label(g, spec.num_genes));
            const double length = std::exp(rng.normal(mu, spec.synthetic.log_sd));
            for (std::uint32_t m = 0; m < type_labels.size(); ++m) {
                const double t = share[m] < 0.0 ? length : length * share[m];
                const auto value = std::max<std::int64_t>(1, std::llround(t));
                cells.push_back({g, m, -1, value});
            }
        }
    }

    const auto G = gene_names.size();
    const auto M = type_labels.size();
    const auto K = sample_labels.size();

    Simulation sim{MutationDataset{}, {}, {}, {}, spec.alpha, spec.beta};
    if (sim.alpha.empty()) sim.alpha = default_type_effects(type_labels);
    if (sim.beta.empty()) sim.beta = lognormal_sample_effects(K, 0.5, spec.seed);
    if (sim.alpha.size() != M) throw UsageError("alpha does not match the number of types");

    // Planted drivers: one shuffle, consecutive blocks per tier.
    const auto counts = tier_counts(spec.tiers, G);
    const auto drivers = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (drivers > G) throw UsageError("driver tiers request more genes than available");
    std::vector<std::uint32_t> order(G);
    std::iota(order.begin(), order.end(), 0u);
    {
        Rng rng(spec.seed, kDriverStream);
        for (std::size_t i = 0; i + 1 < G; ++i) std::swap(order[i], order[i + rng.below(G - i)]);
    }
    sim.multiplier.assign(G, 1.0);
    sim.is_driver.assign(G, 0);
    std::size_t pos = 0;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        for (std::size_t j = 0; j < counts[t]; ++j, ++pos) {
            sim.multiplier[order[pos]] = spec.tiers[t].multiplier;
            sim.is_driver[order[pos]] = spec.tiers[t].multiplier > 1.0 ? 1 : 0;
        }
    }
    sim.true_lambda.resize(G);
    for (std::size_t g = 0; g < G; ++g) sim.true_lambda[g] = spec.lambda0 * sim.multiplier[g];

    DatasetBuilder builder(type_labels);
    for (const auto& name : gene_names) builder.add_gene(name);
    for (const auto& label : sample_labels) builder.add_sample(label);
    Rng rng(spec.seed, kCountStream);
    for (const auto& c : cells) {
        if (c.sample < 0) {
            builder.add_broadcast_coverage(c.gene, c.type, c.coverage);
            for (std::uint32_t k = 0; k < K; ++k) {
                const auto x = rng.poisson(sim.true_lambda[c.gene] * sim.alpha[c.type] * sim.beta[k] *
                                           static_cast<double>(c.coverage));
                if (x > 0) builder.add_count(c.gene, c.type, k, static_cast<std::int32_t>(x));
            }
        } else {
            const auto k = static_cast<std::uint32_t>(c.sample);
            builder.add_coverage(c.gene, c.type, k, c.coverage);
            const auto x = rng.poisson(sim.true_lambda[c.gene] * sim.alpha[c.type] * sim.beta[k] *
                                       static_cast<double>(c.coverage));
            if (x > 0) builder.add_count(c.gene, c.type, k, static_cast<std::int32_t>(x));
        }
    }
    sim.data = std::move(builder).build();
    return sim;
}

void write_truth(const Simulation& sim, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    std::string buf = "gene\ttier_multiplier\ttrue_lambda\tis_driver\n";
    for (std::uint32_t g = 0; g < sim.data.num_genes(); ++g) {
        buf += sim.data.gene_name(g);
        buf += '\t';
        append_double(buf, sim.multiplier[g]);
        buf += '\t';
        append_double(buf, sim.true_lambda[g]);
        buf += sim.is_driver[g] ? "\t1\n" : "\t0\n";
    }
    out << buf;
}

void write_effects(const MutationDataset& data, std::span<const double> alpha, std::span<const double> beta,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    std::string buf = "kind\tlabel\tvalue\n";
    for (std::size_t m = 0; m < alpha.size(); ++m) {
        buf += "type\t" + data.types()[m].label + '\t';
        append_double(buf, alpha[m]);
        buf += '\n';
    }
    for (std::size_t k = 0; k < beta.size(); ++k) {
        buf += "sample\t" + data.samples()[k].label + '\t';
        append_double(buf, beta[k]);
        buf += '\n';
    }
    out << buf;
}

Truth load_truth(const std::filesystem::path& path) {
    tsv::Reader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError(path.string() + ": missing header");
    if (line != "gene\ttier_multiplier\ttrue_lambda\tis_driver")
        reader.fail("expected header 'gene<TAB>tier_multiplier<TAB>true_lambda<TAB>is_driver'");
    Truth t;
    while (reader.next(line)) {
        auto cols = tsv::split(line);
        if (cols.size() != 4) reader.fail("expected 4 columns, found " + std::to_string(cols.size()));
        double mult = 0.0, lambda = 0.0;
        int driver = 0;
        if (!tsv::parse_double(cols[1], mult)) reader.fail("bad tier_multiplier '" + std::string(cols[1]) + "'");
        if (!tsv::parse_double(cols[2], lambda)) reader.fail("bad true_lambda '" + std::string(cols[2]) + "'");
        if (!tsv::parse_int(cols[3], driver) || (driver != 0 && driver != 1))
            reader.fail("is_driver must be 0 or 1");
        t.genes.emplace_back(tsv::trim(cols[0]));
        t.multiplier.push_back(mult);
        t.true_lambda.push_back(lambda);
        t.is_driver.push_back(static_cast<std::uint8_t>(driver));
    }
    return t;
}

Effects load_effects(const std::filesystem::path& path, const MutationDataset& data) {
    tsv::Reader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError(path.string() + ": missing header");
    if (line != "kind\tlabel\tvalue") reader.fail("expected header 'kind<TAB>label<TAB>value'");
    std::unordered_map<std::string, std::uint32_t> types, samples;
    for (const auto& t : data.types()) types.emplace(t.label, t.id);
    for (const auto& s : data.samples()) samples.emplace(s.label, s.id);
    Effects e;
    e.alpha.assign(data.num_types(), 0.0);
    e.beta.assign(data.num_samples(), 0.0);
    while (reader.next(line)) {
        auto cols = tsv::split(line);
        if (cols.size() != 3) reader.fail("expected 3 columns, found " + std::to_string(cols.size()));
        double v = 0.0;
        if (!tsv::parse_double(cols[2], v) || !(v > 0.0)) reader.fail("effect must be a positive number");
        const std::string label(tsv::trim(cols[1]));
        if (cols[0] == "type") {
            auto it = types.find(label);
            if (it == types.end()) reader.fail("unknown type '" + label + "'");
            e.alpha[it->second] = v;
        } else if (cols[0] == "sample") {
            auto it = samples.find(label);
            if (it == samples.end()) reader.fail("unknown sample '" + label + "'");
            e.beta[it->second] = v;
        } else {
            reader.fail("kind must be 'type' or 'sample'");
        }
    }
    for (std::size_t m = 0; m < e.alpha.size(); ++m)
        if (e.alpha[m] == 0.0) throw DataError(path.string() + ": missing effect for type '" + data.types()[m].label + "'");
    for (std::size_t k = 0; k < e.beta.size(); ++k)
        if (e.beta[k] == 0.0)
            throw DataError(path.string() + ": missing effect for sample '" + data.samples()[k].label + "'");
    return e;
}

} // namespace hbmut
