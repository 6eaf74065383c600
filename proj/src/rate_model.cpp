#include "hbmut/rate_model.hpp"

#include "hbmut/errors.hpp"

#include <cmath>

namespace hbmut {

namespace {

// log Poisson(x | mu), full normalisation.
double log_poisson(std::int64_t x, double mu) {
    const double xd = static_cast<double>(x);
    if (x == 0) return -mu;
    return xd * std::log(mu) - mu - std::lgamma(xd + 1.0);
}

} // namespace

namespace rate_model {

double log_new_cluster_predictive(std::int64_t x, double gamma, double exposure) {
    const double denom = std::log(gamma + exposure);
    double lp = std::log(gamma) - denom;
    if (x > 0) lp += static_cast<double>(x) * (std::log(exposure) - denom);
    return lp;
}

std::vector<double> reassignment_log_weights(const ChainState& state, double concentration, std::int64_t x,
                                             double exposure) {
    const auto& part = state.partition;
    std::vector<double> lw(part.num_clusters() + 1);
    for (std::size_t c = 0; c < part.num_clusters(); ++c)
        lw[c] = std::log(static_cast<double>(part.size(c))) + log_poisson(x, part.value(c) * exposure);
    lw.back() = std::log(concentration) + log_new_cluster_predictive(x, state.gamma, exposure);
    return lw;
}

void reassign_gene(SweepContext& ctx, std::uint32_t g) {
    auto& part = ctx.state.partition;
    part.remove(g);
    const auto x = ctx.data.gene_count(g);
    const double e = ctx.cache.exposure(g);
    const auto lw = reassignment_log_weights(ctx.state, ctx.config.concentration, x, e);
    const auto pick = ctx.rng.categorical_log(lw);
    if (pick < part.num_clusters()) {
        part.assign(g, pick);
    } else {
        const double theta = ctx.rng.gamma(1.0 + static_cast<double>(x), ctx.state.gamma + e);
        part.open_cluster(g, theta);
    }
}

void resample_cluster_values(SweepContext& ctx) {
    auto& part = ctx.state.partition;
    const auto C = part.num_clusters();
    std::vector<double> sum_x(C, 0.0), sum_e(C, 0.0);
    for (std::uint32_t g = 0; g < ctx.data.num_genes(); ++g) {
        const int c = part.cluster_of(g);
        if (c == Partition::kUnassigned) continue;
        sum_x[c] += static_cast<double>(ctx.data.gene_count(g));
        sum_e[c] += ctx.cache.exposure(g);
    }
    for (std::size_t c = 0; c < C; ++c)
        part.set_value(c, ctx.rng.gamma(1.0 + sum_x[c], ctx.state.gamma + sum_e[c]));
}

} // namespace rate_model

void RateModel::initialize(const MutationDataset& data, const ModelConfig& /*config*/, const ExposureCache& /*cache*/,
                           ChainState& state) const {
    state.partition = Partition(data.num_genes());
    if (data.num_genes() == 0) return;
    const double crude = data.crude_rate();
    state.partition.open_cluster(0, crude);
    for (std::uint32_t g = 1; g < data.num_genes(); ++g) state.partition.assign(g, 0);
}

void RateModel::update_gene_rates(SweepContext& ctx) const {
    for (std::uint32_t g = 0; g < ctx.data.num_genes(); ++g) rate_model::reassign_gene(ctx, g);
    rate_model::resample_cluster_values(ctx);
}

void RateModel::rates(const ChainState& state, std::span<double> out) const {
    for (std::size_t g = 0; g < out.size(); ++g) out[g] = state.partition.value(state.partition.cluster_of(g));
}

RateSummary posterior_rate_summary(const Trace& trace, const MutationDataset& data) {
    if (trace.records.empty()) throw DataError("rate summary needs a non-empty trace");
    RateSummary summary;
    const auto n = trace.records.size();
    if (n < 20)
        summary.warnings.push_back("only " + std::to_string(n) + " recorded draws; credible intervals are unreliable");
    const auto G = trace.num_genes;
    std::vector<double> means(G);
    std::vector<double> draws(n);
    summary.rows.resize(G);
    for (std::uint32_t g = 0; g < G; ++g) {
        for (std::size_t t = 0; t < n; ++t) draws[t] = trace.records[t].lambda[g];
        auto& row = summary.rows[g];
        row.gene = g;
        row.n_mutations = data.gene_count(g);
        row.coverage_total = data.gene_coverage(g);
        row.lambda_mean = mean(draws);
        row.lambda_lo90 = quantile(draws, 0.05);
        row.lambda_hi90 = quantile(draws, 0.95);
        means[g] = row.lambda_mean;
    }
    const auto ranks = ranks_descending(means);
    for (std::uint32_t g = 0; g < G; ++g) summary.rows[g].rank = ranks[g];
    return summary;
}

} // namespace hbmut
