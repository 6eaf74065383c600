#include "hbmut/driver_model.hpp"

#include "hbmut/errors.hpp"
#include "hbmut/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbmut {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Poisson log-density without the -log x! term, which is shared by every
// candidate move of one gene.
double log_poisson_kernel(std::int64_t x, double mu) {
    if (x == 0) return -mu;
    return static_cast<double>(x) * std::log(mu) - mu;
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

} // namespace

namespace driver_model {

double DeltaConditional::driver_probability() const {
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    double total = 0.0, driver = 0.0;
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
        const double w = std::exp(log_weights[i] - top);
        total += w;
        if (i > 0) driver += w;
    }
    return driver / total;
}

DeltaConditional delta_conditional(const ChainState& state, double lambda0, double concentration,
                                   int aux_components, std::int64_t x, double exposure, std::optional<double> reuse,
                                   Rng& rng) {
    const auto& part = state.partition;
    DeltaConditional out;
    out.log_weights.reserve(1 + part.num_clusters() + aux_components);
    out.log_weights.push_back(safe_log(1.0 - state.pi) + log_poisson_kernel(x, lambda0 * exposure));

    const double log_pi = safe_log(state.pi);
    const double log_denom = std::log(static_cast<double>(part.num_assigned()) + concentration);
    for (std::size_t c = 0; c < part.num_clusters(); ++c)
        out.log_weights.push_back(log_pi + std::log(static_cast<double>(part.size(c))) - log_denom +
                                  log_poisson_kernel(x, (lambda0 + part.value(c)) * exposure));

    const double log_aux = std::log(concentration / aux_components) - log_denom;
    for (int j = 0; j < aux_components; ++j) {
        const double v = (j == 0 && reuse) ? *reuse : rng.exponential(state.gamma);
        out.aux_values.push_back(v);
        out.log_weights.push_back(log_pi + log_aux + log_poisson_kernel(x, (lambda0 + v) * exposure));
    }
    return out;
}

void update_delta(SweepContext& ctx, double lambda0, std::uint32_t g) {
    auto& st = ctx.state;
    auto& part = st.partition;
    std::optional<double> reuse;
    if (st.delta[g]) reuse = part.remove(g);
    const auto cond =
        delta_conditional(st, lambda0, ctx.config.concentration, ctx.config.aux_components, ctx.data.gene_count(g),
                          ctx.cache.exposure(g), reuse, ctx.rng);
    const auto pick = ctx.rng.categorical_log(cond.log_weights);
    const auto C = part.num_clusters();
    if (pick == 0) {
        st.delta[g] = 0;
    } else if (pick <= C) {
        st.delta[g] = 1;
        part.assign(g, pick - 1);
    } else {
        st.delta[g] = 1;
        part.open_cluster(g, cond.aux_values[pick - 1 - C]);
    }
}

std::pair<double, double> pi_conditional(const ChainState& state, const ModelConfig& config) {
    double drivers = 0.0;
    for (auto d : state.delta) drivers += d;
    const double G = static_cast<double>(state.delta.size());
    return {config.pi_prior.first + drivers, config.pi_prior.second + G - drivers};
}

void update_pi(SweepContext& ctx) {
    if (ctx.config.fixed_pi) {
        ctx.state.pi = *ctx.config.fixed_pi;
        return;
    }
    auto [a, b] = pi_conditional(ctx.state, ctx.config);
    ctx.state.pi = ctx.rng.beta(a, b);
}

double log_increment_density(double u, double gamma, double lambda0, double sum_x, double sum_e) {
    if (u > 700.0) return kNegInf;
    const double theta = std::exp(u);
    double lp = std::log(gamma) - gamma * theta + u - theta * sum_e;
    if (sum_x > 0.0) lp += sum_x * std::log(lambda0 + theta);
    return lp;
}

double slice_sample_log_increment(double u, double gamma, double lambda0, double sum_x, double sum_e, Rng& rng) {
    constexpr double width = 1.0;
    constexpr int max_steps = 32;
    auto f = [&](double v) { return log_increment_density(v, gamma, lambda0, sum_x, sum_e); };
    const double level = f(u) + std::log(rng.uniform());
    double lo = u - width * rng.uniform();
    double hi = lo + width;
    int j = static_cast<int>(std::floor(max_steps * rng.uniform()));
    int k = max_steps - 1 - j;
    while (j-- > 0 && f(lo) > level) lo -= width;
    while (k-- > 0 && f(hi) > level) hi += width;
    for (int guard = 0; guard < 200; ++guard) {
        const double v = lo + (hi - lo) * rng.uniform();
        if (f(v) > level) return v;
        if (v < u)
            lo = v;
        else
            hi = v;
    }
    return u;
}

void update_increments(SweepContext& ctx, double lambda0) {
    auto& st = ctx.state;
    auto& part = st.partition;
    const double a = ctx.config.concentration;
    const int m = ctx.config.aux_components;
    const double log_aux = std::log(a / m);
    std::vector<double> lw, aux(m);
    for (std::uint32_t g = 0; g < ctx.data.num_genes(); ++g) {
        if (!st.delta[g]) continue;
        const auto reuse = part.remove(g);
        const auto x = ctx.data.gene_count(g);
        const double e = ctx.cache.exposure(g);
        const auto C = part.num_clusters();
        lw.resize(C + m);
        for (std::size_t c = 0; c < C; ++c)
            lw[c] = std::log(static_cast<double>(part.size(c))) +
                    log_poisson_kernel(x, (lambda0 + part.value(c)) * e);
        for (int j = 0; j < m; ++j) {
            aux[j] = (j == 0 && reuse) ? *reuse : ctx.rng.exponential(st.gamma);
            lw[C + j] = log_aux + log_poisson_kernel(x, (lambda0 + aux[j]) * e);
        }
        const auto pick = ctx.rng.categorical_log(lw);
        if (pick < C)
            part.assign(g, pick);
        else
            part.open_cluster(g, aux[pick - C]);
    }

    const auto C = part.num_clusters();
    std::vector<double> sum_x(C, 0.0), sum_e(C, 0.0);
    for (std::uint32_t g = 0; g < ctx.data.num_genes(); ++g) {
        const int c = part.cluster_of(g);
        if (c == Partition::kUnassigned) continue;
        sum_x[c] += static_cast<double>(ctx.data.gene_count(g));
        sum_e[c] += ctx.cache.exposure(g);
    }
    for (std::size_t c = 0; c < C; ++c) {
        const double u =
            slice_sample_log_increment(std::log(part.value(c)), st.gamma, lambda0, sum_x[c], sum_e[c], ctx.rng);
        part.set_value(c, std::max(std::exp(u), std::numeric_limits<double>::min()));
    }
}

} // namespace driver_model

DriverModel::DriverModel(double lambda0) : lambda0_(lambda0) {
    if (!(lambda0 > 0.0)) throw UsageError("lambda0 must be > 0");
}

void DriverModel::initialize(const MutationDataset& data, const ModelConfig& config, const ExposureCache& cache,
                             ChainState& state) const {
    const auto G = data.num_genes();
    state.partition = Partition(G);
    state.delta.assign(G, 0);
    double sum_x = 0.0, sum_e = 0.0, drivers = 0.0;
    for (std::uint32_t g = 0; g < G; ++g) {
        if (data.gene_count(g) >= 2) {
            state.delta[g] = 1;
            drivers += 1.0;
            sum_x += static_cast<double>(data.gene_count(g));
            sum_e += cache.exposure(g);
        }
    }
    if (config.fixed_pi) {
        state.pi = *config.fixed_pi;
    } else {
        const double floor = G > 0 ? 0.5 / static_cast<double>(G) : 0.5;
        state.pi = G > 0 ? std::clamp(drivers / static_cast<double>(G), floor, 1.0 - floor) : 0.5;
    }
    if (drivers == 0.0) return;
    const double theta = sum_e > 0.0 ? std::max(sum_x / sum_e - lambda0_, lambda0_) : lambda0_;
    std::optional<std::size_t> cluster;
    for (std::uint32_t g = 0; g < G; ++g) {
        if (!state.delta[g]) continue;
        if (!cluster)
            cluster = state.partition.open_cluster(g, theta);
        else
            state.partition.assign(g, *cluster);
    }
}

void DriverModel::update_gene_rates(SweepContext& ctx) const { driver_model::update_increments(ctx, lambda0_); }

void DriverModel::update_indicators(SweepContext& ctx) const {
    for (std::uint32_t g = 0; g < ctx.data.num_genes(); ++g) driver_model::update_delta(ctx, lambda0_, g);
    driver_model::update_pi(ctx);
}

void DriverModel::rates(const ChainState& state, std::span<double> out) const {
    for (std::size_t g = 0; g < out.size(); ++g)
        out[g] = state.delta[g] ? lambda0_ + state.partition.value(state.partition.cluster_of(g)) : lambda0_;
}

DriverSummary driver_probability_summary(const Trace& trace, const MutationDataset& data) {
    if (trace.model != ModelKind::driver) throw DataError("driver summary needs a driver-model trace");
    if (trace.records.empty()) throw DataError("driver summary needs a non-empty trace");
    const auto n = trace.records.size();
    const auto G = trace.num_genes;
    DriverSummary s;
    s.rows.resize(G);
    std::vector<double> p(G, 0.0), lam(G, 0.0);
    std::vector<double> pis, totals;
    for (const auto& rec : trace.records) {
        double total = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
            p[g] += rec.delta[g];
            lam[g] += rec.lambda[g];
            total += rec.delta[g];
        }
        totals.push_back(total);
        pis.push_back(rec.pi.value_or(0.0));
    }
    for (std::uint32_t g = 0; g < G; ++g) {
        auto& row = s.rows[g];
        row.gene = g;
        row.n_mutations = data.gene_count(g);
        row.coverage_total = data.gene_coverage(g);
        row.p_driver = p[g] / static_cast<double>(n);
        row.lambda_mean = lam[g] / static_cast<double>(n);
        p[g] = row.p_driver;
    }
    const auto ranks = ranks_descending(p);
    for (std::uint32_t g = 0; g < G; ++g) s.rows[g].rank = ranks[g];
    s.pi_mean = mean(pis);
    s.pi_lo90 = quantile(pis, 0.05);
    s.pi_hi90 = quantile(pis, 0.95);
    s.total_mean = mean(totals);
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) s.total_quantiles.emplace_back(q, quantile(totals, q));
    return s;
}

std::vector<std::map<int, double>> mutated_drivers_per_sample(const Trace& trace, const MutationDataset& data) {
    if (trace.model != ModelKind::driver) throw DataError("drivers per sample needs a driver-model trace");
    if (data.has_pooled_samples())
        throw DataError("drivers per sample is undefined for pooled sample units (stage-level counts)");
    if (trace.records.empty()) throw DataError("drivers per sample needs a non-empty trace");
    const auto K = data.num_samples();
    std::vector<std::map<int, double>> out(K);
    const double w = 1.0 / static_cast<double>(trace.records.size());
    for (const auto& rec : trace.records) {
        for (std::uint32_t k = 0; k < K; ++k) {
            int n = 0;
            for (auto g : data.mutated_genes_in_sample(k)) n += rec.delta[g];
            out[k][n] += w;
        }
    }
    return out;
}

} // namespace hbmut
