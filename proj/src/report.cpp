#include "hbmut/report.hpp"

#include "hbmut/baselines.hpp"
#include "hbmut/config.hpp"
#include "hbmut/driver_model.hpp"
#include "hbmut/errors.hpp"
#include "hbmut/rate_model.hpp"
#include "hbmut/simulator.hpp"
#include "hbmut/summary.hpp"
#include "hbmut/trace_io.hpp"
#include "number_format.hpp"
#include "tsv.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace hbmut {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

constexpr int kTableSchemaVersion = 1;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

MutationDataset load(const DataArgs& a) { return load_dataset(a.counts, a.coverage, a.types); }

ModelConfig resolve_config(const std::optional<fs::path>& path, std::optional<std::uint64_t> seed,
                           std::optional<double> lambda0) {
    ModelConfig c = path ? load_config(*path) : ModelConfig{};
    if (seed) c.seed = *seed;
    if (lambda0) c.lambda0 = *lambda0;
    c.validate();
    return c;
}

json config_json(const ModelConfig& c) {
    json j = json::object();
    std::istringstream in(to_text(c));
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        j[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return j;
}

// Output files below dir, relative paths in sorted order, manifest excluded.
std::vector<fs::path> output_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(fs::relative(e.path(), dir));
    std::sort(files.begin(), files.end());
    return files;
}

void write_manifest(const fs::path& dir, const std::string& command, json extra, Clock::time_point start) {
    json m;
    m["command"] = command;
    for (auto& [k, v] : extra.items()) m[k] = v;
    m["schema_versions"] = {{"tables", kTableSchemaVersion}, {"trace", 1}, {"manifest", 1}};
    json outputs = json::object();
    for (const auto& f : output_files(dir)) outputs[f.generic_string()] = hex64(file_hash(dir / f));
    m["outputs"] = outputs;
    m["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::string fmt(double v) { return format_double(v); }

Trace pool(const std::vector<Trace>& traces) {
    Trace out = traces.front();
    for (std::size_t i = 1; i < traces.size(); ++i)
        out.records.insert(out.records.end(), traces[i].records.begin(), traces[i].records.end());
    return out;
}

std::string effects_table(const MutationDataset& data, const Trace& trace) {
    std::vector<double> alpha(data.num_types(), 0.0), beta(data.num_samples(), 0.0);
    for (const auto& r : trace.records) {
        for (std::size_t m = 0; m < alpha.size(); ++m) alpha[m] += r.alpha[m];
        for (std::size_t k = 0; k < beta.size(); ++k) beta[k] += r.beta[k];
    }
    const double n = static_cast<double>(trace.records.size());
    std::string buf = "kind\tlabel\tvalue\n";
    for (std::size_t m = 0; m < alpha.size(); ++m) buf += "type\t" + data.types()[m].label + '\t' + fmt(alpha[m] / n) + '\n';
    for (std::size_t k = 0; k < beta.size(); ++k)
        buf += "sample\t" + data.samples()[k].label + '\t' + fmt(beta[k] / n) + '\n';
    return buf;
}

std::string predictive_table(const MutationDataset& data, const Trace& trace, const FitArgs& args) {
    std::string buf = "gene\tpredictive_probability\n";
    for (std::uint32_t g = 0; g < data.num_genes(); ++g) {
        auto cov = mean_sample_coverage(data, g);
        for (auto& c : cov) c *= args.predictive_coverage_scale;
        buf += data.gene_name(g) + '\t' +
               fmt(predictive_mutation_probability(trace, data, g, std::span<const double>(cov), args.predictive_beta)) +
               '\n';
    }
    return buf;
}

std::string rate_table(const MutationDataset& data, const RateSummary& s) {
    auto rows = s.rows;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    std::string buf = "gene\tn_mutations\tcoverage_total\tlambda_mean\tlambda_lo90\tlambda_hi90\trank\n";
    for (const auto& r : rows)
        buf += data.gene_name(r.gene) + '\t' + std::to_string(r.n_mutations) + '\t' + fmt(r.coverage_total) + '\t' +
               fmt(r.lambda_mean) + '\t' + fmt(r.lambda_lo90) + '\t' + fmt(r.lambda_hi90) + '\t' +
               std::to_string(r.rank) + '\n';
    return buf;
}

std::string driver_table(const MutationDataset& data, const DriverSummary& s) {
    auto rows = s.rows;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    std::string buf = "gene\tn_mutations\tcoverage_total\tp_driver\tlambda_mean\trank\n";
    for (const auto& r : rows)
        buf += data.gene_name(r.gene) + '\t' + std::to_string(r.n_mutations) + '\t' + fmt(r.coverage_total) + '\t' +
               fmt(r.p_driver) + '\t' + fmt(r.lambda_mean) + '\t' + std::to_string(r.rank) + '\n';
    return buf;
}

std::string genome_table(const Trace& trace) {
    std::vector<double> pis, totals;
    for (const auto& r : trace.records) {
        pis.push_back(r.pi.value_or(0.0));
        double t = 0.0;
        for (auto d : r.delta) t += d;
        totals.push_back(t);
    }
    std::string buf = "quantity\tmean\tlo90\tq25\tmedian\tq75\thi90\n";
    auto row = [&](const std::string& name, const std::vector<double>& v) {
        buf += name + '\t' + fmt(mean(v)) + '\t' + fmt(quantile(v, 0.05)) + '\t' + fmt(quantile(v, 0.25)) + '\t' +
               fmt(quantile(v, 0.5)) + '\t' + fmt(quantile(v, 0.75)) + '\t' + fmt(quantile(v, 0.95)) + '\n';
    };
    row("pi", pis);
    row("total_drivers", totals);
    return buf;
}

std::string drivers_per_sample_table(const MutationDataset& data, const Trace& trace) {
    const auto dist = mutated_drivers_per_sample(trace, data);
    std::string buf = "sample\tn_mutated_drivers\tprobability\n";
    for (std::size_t k = 0; k < dist.size(); ++k)
        for (const auto& [n, p] : dist[k]) buf += data.samples()[k].label + '\t' + std::to_string(n) + '\t' + fmt(p) + '\n';
    return buf;
}

// Per-chain series used for convergence checks.
std::vector<std::pair<std::string, std::vector<std::vector<double>>>> diagnostic_series(
    const std::vector<Trace>& traces) {
    std::vector<std::pair<std::string, std::vector<std::vector<double>>>> out;
    auto add = [&](const std::string& name, auto get) {
        std::vector<std::vector<double>> chains;
        for (const auto& t : traces) {
            std::vector<double> v;
            for (const auto& r : t.records) v.push_back(get(r));
            chains.push_back(std::move(v));
        }
        out.emplace_back(name, std::move(chains));
    };
    add("loglik", [](const TraceRecord& r) { return r.log_likelihood; });
    add("gamma", [](const TraceRecord& r) { return r.gamma; });
    add("clusters", [](const TraceRecord& r) { return static_cast<double>(r.clusters); });
    if (traces.front().model == ModelKind::driver) {
        add("pi", [](const TraceRecord& r) { return r.pi.value_or(0.0); });
        add("total_drivers", [](const TraceRecord& r) {
            double t = 0.0;
            for (auto d : r.delta) t += d;
            return t;
        });
    }
    return out;
}

std::string diagnostics_table(const std::vector<Trace>& traces) {
    std::string buf = "quantity\tmean\tmcse\tsplit_rhat\n";
    for (const auto& [name, chains] : diagnostic_series(traces)) {
        std::vector<double> all;
        for (const auto& c : chains) all.insert(all.end(), c.begin(), c.end());
        const bool enough = std::all_of(chains.begin(), chains.end(), [](const auto& c) { return c.size() >= 4; });
        buf += name + '\t' + fmt(mean(all)) + '\t' + (all.size() >= 4 ? fmt(batch_means_mcse(all)) : "NA") + '\t' +
               (enough ? fmt(split_rhat(chains)) : "NA") + '\n';
    }
    return buf;
}

void write_fit_tables(const fs::path& dir, const MutationDataset& data, const Trace& trace, const FitArgs& args) {
    if (trace.model == ModelKind::rate) {
        const auto s = posterior_rate_summary(trace, data);
        for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
        write_text(dir / "rate_summary.tsv", rate_table(data, s));
    } else {
        const auto s = driver_probability_summary(trace, data);
        write_text(dir / "driver_summary.tsv", driver_table(data, s));
        write_text(dir / "genome_summary.tsv", genome_table(trace));
        if (!data.has_pooled_samples()) write_text(dir / "drivers_per_sample.tsv", drivers_per_sample_table(data, trace));
    }
    write_text(dir / "effects.tsv", effects_table(data, trace));
    write_text(dir / "predictive.tsv", predictive_table(data, trace, args));
}

void run_fit(const FitArgs& args, ModelKind kind) {
    const auto start = Clock::now();
    if (args.chains < 1) throw UsageError("--chains must be >= 1");
    const auto config = resolve_config(args.config, args.seed, args.lambda0);
    if (kind == ModelKind::driver && !config.lambda0)
        throw UsageError("fit-drivers needs lambda0, the per-base passenger rate (config key lambda0 or --lambda0); "
                         "reference values are low " + fmt(kLambda0Low) + ", intermediate " +
                         fmt(kLambda0Intermediate) + ", high " + fmt(kLambda0High));
    const auto data = load(args.data);
    ensure_dir(args.out);

    const auto traces = run_chains(data, config, kind, args.chains);
    if (traces.size() == 1) {
        write_trace(traces[0], args.out / "trace.tsv");
    } else {
        for (std::size_t i = 0; i < traces.size(); ++i) {
            const auto dir = args.out / ("chain" + std::to_string(i + 1));
            ensure_dir(dir);
            write_trace(traces[i], dir / "trace.tsv");
            write_fit_tables(dir, data, traces[i], args);
        }
    }
    const auto pooled = pool(traces);
    write_fit_tables(args.out, data, pooled, args);
    write_text(args.out / "diagnostics.tsv", diagnostics_table(traces));

    json extra;
    extra["model"] = to_string(kind);
    extra["config"] = config_json(config);
    extra["seed"] = config.seed;
    extra["chains"] = args.chains;
    extra["dataset_fingerprint"] = hex64(fingerprint(data));
    extra["predictive"] = {{"sample_effect", args.predictive_beta}, {"coverage_scale", args.predictive_coverage_scale}};
    write_manifest(args.out, kind == ModelKind::rate ? "fit-rates" : "fit-drivers", extra, start);
}

struct DriverTableRow {
    std::string gene;
    double p_driver;
};

std::vector<DriverTableRow> read_driver_table(const fs::path& path) {
    tsv::Reader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError(path.string() + ": missing header");
    if (line != "gene\tn_mutations\tcoverage_total\tp_driver\tlambda_mean\trank")
        reader.fail("not a driver summary table");
    std::vector<DriverTableRow> rows;
    while (reader.next(line)) {
        auto cols = tsv::split(line);
        if (cols.size() != 6) reader.fail("expected 6 columns");
        DriverTableRow r{std::string(cols[0]), 0.0};
        if (!tsv::parse_double(cols[3], r.p_driver)) reader.fail("bad p_driver");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::optional<double> manifest_lambda0(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!m.contains("config") || !m["config"].contains("lambda0")) return std::nullopt;
    const auto text = m["config"]["lambda0"].get<std::string>();
    double v = 0.0;
    if (!tsv::parse_double(text, v)) return std::nullopt;
    return v;
}

std::size_t symmetric_difference(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::string> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return diff.size();
}

Effects unit_effects(const MutationDataset& data) {
    return Effects{std::vector<double>(data.num_types(), 1.0), std::vector<double>(data.num_samples(), 1.0)};
}

} // namespace

std::uint64_t file_hash(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return 2;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const NumericalError*>(&e)) return 4;
    return 1;
}

std::vector<double> mean_sample_coverage(const MutationDataset& data, std::uint32_t gene) {
    std::vector<double> sum(data.num_types(), 0.0), units(data.num_types(), 0.0);
    for (const auto& r : data.gene_rows(gene)) {
        if (r.coverage <= 0) continue;
        const auto n = static_cast<double>(data.sample_set(r.sample_set).size());
        sum[r.type] += n * static_cast<double>(r.coverage);
        units[r.type] += n;
    }
    for (std::size_t m = 0; m < sum.size(); ++m) sum[m] = units[m] > 0.0 ? sum[m] / units[m] : 0.0;
    return sum;
}

double predictive_mutation_probability(const Trace& trace, const MutationDataset& data, std::uint32_t gene,
                                       std::optional<std::span<const double>> new_sample_coverage,
                                       double new_sample_effect) {
    if (gene >= data.num_genes() || gene >= trace.num_genes) throw DataError("unknown gene id " + std::to_string(gene));
    if (trace.records.empty()) throw DataError("predictive probability needs a non-empty trace");
    std::vector<double> cov;
    if (new_sample_coverage) {
        cov.assign(new_sample_coverage->begin(), new_sample_coverage->end());
        if (cov.size() != data.num_types()) throw UsageError("new-sample coverage needs one value per type");
    } else {
        cov = mean_sample_coverage(data, gene);
    }
    double total = 0.0;
    for (const auto& r : trace.records) {
        double e = 0.0;
        for (std::size_t m = 0; m < cov.size(); ++m) e += r.alpha[m] * cov[m];
        total += -std::expm1(-r.lambda[gene] * new_sample_effect * e);
    }
    return total / static_cast<double>(trace.records.size());
}

double predictive_mutation_probability(const Trace& trace, const MutationDataset& data, const std::string& gene,
                                       std::optional<std::span<const double>> new_sample_coverage,
                                       double new_sample_effect) {
    const auto id = data.find_gene(gene);
    if (!id) throw DataError("unknown gene '" + gene + "'");
    return predictive_mutation_probability(trace, data, *id, new_sample_coverage, new_sample_effect);
}

std::vector<Trace> run_chains(const MutationDataset& data, const ModelConfig& config, ModelKind kind, int chains) {
    if (chains < 1) throw UsageError("--chains must be >= 1");
    std::vector<Trace> traces(chains);
    if (chains == 1) {
        traces[0] = run_chain(data, config, kind, 0);
        return traces;
    }
    std::vector<std::exception_ptr> errors(chains);
    std::vector<std::thread> workers;
    for (int i = 0; i < chains; ++i) {
        workers.emplace_back([&, i] {
            try {
                traces[i] = run_chain(data, config, kind, static_cast<std::uint64_t>(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return traces;
}

void cmd_fit_rates(const FitArgs& args) { run_fit(args, ModelKind::rate); }

void cmd_fit_drivers(const FitArgs& args) { run_fit(args, ModelKind::driver); }

void cmd_simulate(const SimulateArgs& args) {
    const auto start = Clock::now();
    ScenarioSpec spec;
    if (args.coverage_source) {
        auto src = std::make_shared<const MutationDataset>(load(*args.coverage_source));
        spec = scenario_from_coverage(std::move(src), args.seed);
        if (args.genes || args.samples) throw UsageError("--genes/--samples apply to synthetic coverage only");
    } else {
        spec = default_scenario(args.seed);
        if (args.genes) spec.num_genes = *args.genes;
        if (args.samples) spec.num_samples = *args.samples;
    }
    if (args.lambda0) spec.lambda0 = *args.lambda0;
    if (args.target_g) spec = desk_scale(spec, *args.target_g);
    const auto sim = generate(spec);

    ensure_dir(args.out);
    write_dataset(sim.data, args.out / "counts.tsv", args.out / "coverage.tsv");
    write_types(sim.data, args.out / "types.tsv");
    write_truth(sim, args.out / "truth.tsv");
    write_effects(sim.data, sim.alpha, sim.beta, args.out / "true_effects.tsv");

    json extra;
    extra["seed"] = args.seed;
    extra["genes"] = sim.data.num_genes();
    extra["types"] = sim.data.num_types();
    extra["samples"] = sim.data.num_samples();
    extra["lambda0"] = fmt(spec.lambda0);
    json tiers = json::array();
    const auto counts = tier_counts(spec.tiers, sim.data.num_genes());
    for (std::size_t i = 0; i < spec.tiers.size(); ++i)
        tiers.push_back({{"fraction", spec.tiers[i].fraction}, {"multiplier", spec.tiers[i].multiplier},
                         {"genes", counts[i]}});
    extra["tiers"] = tiers;
    extra["coverage"] = args.coverage_source ? "real" : "synthetic";
    extra["dataset_fingerprint"] = hex64(fingerprint(sim.data));
    write_manifest(args.out, "simulate", extra, start);
}

void cmd_evaluate(const EvaluateArgs& args) {
    const auto start = Clock::now();
    const auto data = load(args.data);
    const auto fit_rows = read_driver_table(args.fit / "driver_summary.tsv");
    const auto truth = load_truth(args.truth);

    std::vector<std::string> fit_genes;
    for (const auto& r : fit_rows) fit_genes.push_back(r.gene);
    if (auto d = symmetric_difference(fit_genes, truth.genes); d != 0)
        throw DataError("fit and truth gene sets differ (symmetric difference: " + std::to_string(d) + " genes)");
    if (auto d = symmetric_difference(fit_genes, data.gene_names()); d != 0)
        throw DataError("fit and dataset gene sets differ (symmetric difference: " + std::to_string(d) + " genes)");

    const auto G = data.num_genes();
    std::vector<double> p_driver(G, 0.0);
    for (const auto& r : fit_rows) p_driver[*data.find_gene(r.gene)] = r.p_driver;
    std::vector<std::uint8_t> is_driver(G, 0);
    for (std::size_t i = 0; i < truth.genes.size(); ++i) is_driver[*data.find_gene(truth.genes[i])] = truth.is_driver[i];

    auto lambda0 = args.lambda0;
    if (!lambda0) lambda0 = manifest_lambda0(args.fit / "manifest.json");
    if (!lambda0) throw UsageError("evaluate needs lambda0 (--lambda0, or a fit manifest that records it)");
    Effects effects = unit_effects(data);
    if (args.effects)
        effects = load_effects(*args.effects, data);
    else if (fs::exists(args.fit / "effects.tsv"))
        effects = load_effects(args.fit / "effects.tsv", data);

    const auto tests = run_baseline(data, effects.alpha, effects.beta, *lambda0);
    std::vector<double> p(G);
    for (std::size_t g = 0; g < G; ++g) p[g] = tests[g].p_value;

    const auto max_k = std::min(args.max_k, G);
    if (max_k == 0) throw UsageError("--max-k must be >= 1");
    std::vector<std::size_t> ks(max_k);
    for (std::size_t k = 0; k < max_k; ++k) ks[k] = k + 1;
    const auto bayes = bayes_fdr_curve(p_driver, ks);
    const auto bh = bh_fdr_curve(p, ks);
    const auto bayes_rank = order_descending(p_driver);
    const auto p_rank = pvalue_ranking(p);
    const auto true_bayes = true_fdr_curve(bayes_rank, is_driver, ks);
    const auto true_p = true_fdr_curve(p_rank, is_driver, ks);

    ensure_dir(args.out);
    std::string buf = "k\tbayes_fdr\tbh_fdr\ttrue_fdr\ttrue_fdr_pvalue_rank\n";
    double dev_bayes = 0.0, dev_bh = 0.0, ratio_bh = 0.0;
    for (std::size_t i = 0; i < max_k; ++i) {
        buf += std::to_string(ks[i]) + '\t' + fmt(bayes[i]) + '\t' + fmt(bh[i]) + '\t' + fmt(true_bayes[i]) + '\t' +
               fmt(true_p[i]) + '\n';
        dev_bayes = std::max(dev_bayes, std::abs(bayes[i] - true_bayes[i]));
        dev_bh = std::max(dev_bh, std::abs(bh[i] - true_p[i]));
        if (true_p[i] >= 0.1) ratio_bh = std::max(ratio_bh, bh[i] / true_p[i]);
    }
    write_text(args.out / "fdr_curve.tsv", buf);
    std::string cal = "method\tmax_abs_deviation\tmax_ratio_to_true\n";
    cal += "bayes\t" + fmt(dev_bayes) + "\tNA\n";
    cal += "bh\t" + fmt(dev_bh) + '\t' + fmt(ratio_bh) + '\n';
    write_text(args.out / "calibration.tsv", cal);

    json extra;
    extra["fit"] = args.fit.generic_string();
    extra["max_k"] = max_k;
    extra["lambda0"] = fmt(*lambda0);
    extra["dataset_fingerprint"] = hex64(fingerprint(data));
    write_manifest(args.out, "evaluate", extra, start);
}

void cmd_baseline(const BaselineArgs& args) {
    const auto start = Clock::now();
    auto lambda0 = args.lambda0;
    if (!lambda0 && args.config) lambda0 = load_config(*args.config).lambda0;
    if (!lambda0) throw UsageError("baseline needs lambda0 (--lambda0 or config key lambda0)");
    if (!(*lambda0 > 0.0)) throw UsageError("lambda0 must be > 0");
    const auto data = load(args.data);
    const auto effects = args.effects ? load_effects(*args.effects, data) : unit_effects(data);
    const auto tests = run_baseline(data, effects.alpha, effects.beta, *lambda0);

    ensure_dir(args.out);
    std::string buf = "gene\tX\tE\tmle\tp\tbh_q\n";
    for (const auto& t : tests)
        buf += data.gene_name(t.gene) + '\t' + std::to_string(t.count) + '\t' + fmt(t.exposure) + '\t' +
               (t.mle_rate ? fmt(*t.mle_rate) : std::string("NA")) + '\t' + fmt(t.p_value) + '\t' +
               fmt(t.bh_adjusted) + '\n';
    write_text(args.out / "baseline.tsv", buf);

    json extra;
    extra["lambda0"] = fmt(*lambda0);
    extra["effects"] = args.effects ? args.effects->generic_string() : "unit";
    extra["dataset_fingerprint"] = hex64(fingerprint(data));
    write_manifest(args.out, "baseline", extra, start);
}

} // namespace hbmut
