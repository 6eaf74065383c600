#pragma once
// Gene mutation rates under a Dirichlet-process prior with Exponential(gamma)
// base measure. Gamma-Poisson conjugacy gives a closed-form predictive for a
// new cluster and an exact Gamma conditional for cluster values.

#include "hbmut/engine.hpp"
#include "hbmut/summary.hpp"

#include <vector>

namespace hbmut {

class RateModel final : public GeneRateModel {
  public:
    ModelKind kind() const override { return ModelKind::rate; }
    // All genes in one cluster at the crude genome rate.
    void initialize(const MutationDataset& data, const ModelConfig& config, const ExposureCache& cache,
                    ChainState& state) const override;
    // Reassigns every gene in id order, then refreshes cluster values.
    void update_gene_rates(SweepContext& ctx) const override;
    void rates(const ChainState& state, std::span<double> out) const override;
};

namespace rate_model {

// log P(X = x) for x ~ Poisson(theta E), theta ~ Exponential(gamma):
// the geometric law (gamma / (gamma + E)) (E / (gamma + E))^x.
double log_new_cluster_predictive(std::int64_t x, double gamma, double exposure);

// Unnormalised log weights for gene g's reassignment (g already removed):
// one per existing cluster, then the new-cluster weight last.
std::vector<double> reassignment_log_weights(const ChainState& state, double concentration, std::int64_t x,
                                             double exposure);

void reassign_gene(SweepContext& ctx, std::uint32_t g);
void resample_cluster_values(SweepContext& ctx);

} // namespace rate_model

struct RateSummaryRow {
    std::uint32_t gene = 0;
    std::int64_t n_mutations = 0;
    double coverage_total = 0.0;
    double lambda_mean = 0.0;
    double lambda_lo90 = 0.0;
    double lambda_hi90 = 0.0;
    std::size_t rank = 0;  // 1 = highest posterior mean
};

struct RateSummary {
    std::vector<RateSummaryRow> rows;  // gene-id order
    std::vector<std::string> warnings;
};

// Posterior mean and equal-tailed 90% interval of every gene's rate.
RateSummary posterior_rate_summary(const Trace& trace, const MutationDataset& data);

} // namespace hbmut
