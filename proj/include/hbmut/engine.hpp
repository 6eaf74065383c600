#pragma once
// MCMC driver shared by both models. A sweep runs, in order: the model's
// gene-rate updates, the type effects, the sample effects, the base-measure
// rate gamma, and the model's indicator updates (driver model only).

#include "hbmut/config.hpp"
#include "hbmut/dataset.hpp"
#include "hbmut/exposure.hpp"
#include "hbmut/partition.hpp"
#include "hbmut/random.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hbmut {

enum class ModelKind { rate, driver };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

// Random-walk step sizes for the log effects, adapted during burn-in only.
struct EffectProposals {
    std::vector<double> alpha_scale;
    std::vector<double> beta_scale;
    std::vector<std::uint64_t> alpha_accepted, alpha_tried;
    std::vector<std::uint64_t> beta_accepted, beta_tried;
};

struct ChainState {
    // Type and sample effects; prod(alpha) = prod(beta) = 1.
    std::vector<double> alpha;
    std::vector<double> beta;
    // Rate of the Exponential base measure.
    double gamma = 1.0;
    // Rate model: every gene, values are per-gene rates.
    // Driver model: driver genes only, values are rate increments.
    Partition partition;
    // Driver model only.
    std::vector<std::uint8_t> delta;
    double pi = 0.0;
    EffectProposals proposals;
};

struct SweepContext {
    const MutationDataset& data;
    const ModelConfig& config;
    ChainState& state;
    ExposureCache& cache;
    Rng& rng;
    // Resolved Gamma(shape, rate) prior on gamma.
    std::pair<double, double> gamma_prior;
    int iteration = 0;
};

// Per-model plug-in owning the gene-level parameters.
class GeneRateModel {
  public:
    virtual ~GeneRateModel() = default;
    virtual ModelKind kind() const = 0;
    virtual void initialize(const MutationDataset& data, const ModelConfig& config, const ExposureCache& cache,
                            ChainState& state) const = 0;
    virtual void update_gene_rates(SweepContext& ctx) const = 0;
    virtual void update_indicators(SweepContext& /*ctx*/) const {}
    virtual void rates(const ChainState& state, std::span<double> out) const = 0;
};

std::unique_ptr<GeneRateModel> make_model(ModelKind kind, const ModelConfig& config);

struct TraceRecord {
    int iteration = 0;
    double gamma = 0.0;
    std::optional<double> pi;
    std::size_t clusters = 0;
    double log_likelihood = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> lambda;
    // Driver model only: indicators and the per-gene increment (0 for passengers).
    std::vector<std::uint8_t> delta;
    std::vector<double> increment;
};

struct Trace {
    ModelKind model = ModelKind::rate;
    std::optional<double> lambda0;
    std::size_t num_genes = 0;
    std::vector<TraceRecord> records;
};

// Poisson log-likelihood of all cells with positive coverage, evaluated from
// the exposure cache without touching zero-count cells. Throws
// NumericalError when the result is not finite.
double log_likelihood(const MutationDataset& data, const ExposureCache& cache, std::span<const double> rates,
                      std::span<const double> alpha, std::span<const double> beta);
double log_likelihood(const MutationDataset& data, std::span<const double> rates, std::span<const double> alpha,
                      std::span<const double> beta);

// One Metropolis pass over the type effects, then one over the sample
// effects. Each proposal moves one log effect and re-centres the whole log
// vector onto the sum-zero plane; exposures are updated incrementally.
void update_effects(SweepContext& ctx, std::span<const double> rates);

// Conjugate conditional of gamma given cluster values drawn from
// Exponential(gamma): Gamma(shape + C, rate + sum).
std::pair<double, double> gamma_conditional(std::span<const double> cluster_values, std::pair<double, double> prior);
void update_gamma(SweepContext& ctx);

class Chain {
  public:
    Chain(const MutationDataset& data, const ModelConfig& config, ModelKind kind, std::uint64_t chain_index = 0);

    // One full iteration.
    void sweep();
    int iteration() const { return iteration_; }
    const ChainState& state() const { return state_; }
    ChainState& mutable_state() { return state_; }
    const ExposureCache& cache() const { return cache_; }
    void refresh_cache();
    std::vector<double> rates() const;
    TraceRecord snapshot() const;
    const GeneRateModel& model() const { return *model_; }
    SweepContext context();

  private:
    const MutationDataset& data_;
    ModelConfig config_;
    std::unique_ptr<GeneRateModel> model_;
    ChainState state_;
    ExposureCache cache_;
    Rng rng_;
    std::pair<double, double> gamma_prior_;
    int iteration_ = 0;
};

// Runs config.iterations sweeps and keeps every thin-th post-burn-in state.
// Deterministic in (data, config, chain_index).
Trace run_chain(const MutationDataset& data, const ModelConfig& config, ModelKind kind,
                std::uint64_t chain_index = 0);

} // namespace hbmut
