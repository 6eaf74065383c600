#pragma once
// Driver-probability model. Passengers share the known per-base rate
// lambda0; a driver's rate is lambda0 plus an increment drawn from a
// Dirichlet process with Exponential(gamma) base. Indicators delta_g are
// Bernoulli(pi) with pi ~ Beta(a, b).
//
// The state's partition holds only driver genes and its values are the
// increments. The base measure is not conjugate to the shifted Poisson
// likelihood, so reassignments use auxiliary candidate clusters and cluster
// values are refreshed by slice sampling on log(increment).

#include "hbmut/engine.hpp"

#include <map>
#include <vector>

namespace hbmut {

class DriverModel final : public GeneRateModel {
  public:
    explicit DriverModel(double lambda0);

    ModelKind kind() const override { return ModelKind::driver; }
    // delta_g = 1 iff X_g >= 2, pi = mean(delta), drivers in one cluster.
    void initialize(const MutationDataset& data, const ModelConfig& config, const ExposureCache& cache,
                    ChainState& state) const override;
    // Increment reassignments and slice-sampled cluster values.
    void update_gene_rates(SweepContext& ctx) const override;
    // delta for every gene in id order, then pi.
    void update_indicators(SweepContext& ctx) const override;
    void rates(const ChainState& state, std::span<double> out) const override;

    double lambda0() const { return lambda0_; }

  private:
    double lambda0_;
};

namespace driver_model {

// Candidate moves for one gene with the gene already removed from the
// partition: passenger first, then each existing cluster, then the
// auxiliary clusters.
struct DeltaConditional {
    std::vector<double> log_weights;
    std::vector<double> aux_values;

    // Probability mass on the driver options.
    double driver_probability() const;
};

// When `reuse` holds a value (the gene was a singleton), it becomes the
// first auxiliary value; the remaining ones are drawn from Exponential(gamma).
DeltaConditional delta_conditional(const ChainState& state, double lambda0, double concentration,
                                   int aux_components, std::int64_t x, double exposure, std::optional<double> reuse,
                                   Rng& rng);

void update_delta(SweepContext& ctx, double lambda0, std::uint32_t g);

// Beta(a + sum delta, b + G - sum delta).
std::pair<double, double> pi_conditional(const ChainState& state, const ModelConfig& config);
void update_pi(SweepContext& ctx);

// Reassign every driver gene among increment clusters, then refresh values.
void update_increments(SweepContext& ctx, double lambda0);

// log density of u = log(theta) for a cluster holding total count sum_x and
// total exposure sum_e: Exponential(gamma) prior, Jacobian, shifted Poisson.
double log_increment_density(double u, double gamma, double lambda0, double sum_x, double sum_e);

// One stepping-out / shrinkage slice update of u = log(theta).
double slice_sample_log_increment(double u, double gamma, double lambda0, double sum_x, double sum_e, Rng& rng);

} // namespace driver_model

struct DriverSummaryRow {
    std::uint32_t gene = 0;
    std::int64_t n_mutations = 0;
    double coverage_total = 0.0;
    double p_driver = 0.0;
    double lambda_mean = 0.0;
    std::size_t rank = 0;
};

struct DriverSummary {
    std::vector<DriverSummaryRow> rows;  // gene-id order
    double pi_mean = 0.0;
    double pi_lo90 = 0.0;
    double pi_hi90 = 0.0;
    // Posterior of the number of driver genes.
    double total_mean = 0.0;
    std::vector<std::pair<double, double>> total_quantiles;  // (probability, value)
};

DriverSummary driver_probability_summary(const Trace& trace, const MutationDataset& data);

// For each sample unit, the posterior distribution over draws of the number
// of genes with delta_g = 1 and at least one mutation in that sample.
// Refuses datasets with pooled sample units.
std::vector<std::map<int, double>> mutated_drivers_per_sample(const Trace& trace, const MutationDataset& data);

} // namespace hbmut
