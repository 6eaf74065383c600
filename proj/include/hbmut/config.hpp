#pragma once
// Sampler configuration, read from a flat key=value file. Each field below
// has a key of the same name.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

namespace hbmut {

struct ModelConfig {
    // Dirichlet-process concentration.
    double concentration = 1.0;
    // Gamma(shape, rate) prior on the rate of the Exponential base measure.
    // Unset means shape 1 and rate equal to the crude genome rate.
    std::optional<std::pair<double, double>> gamma_prior;
    // Passenger per-base rate; required by the driver model only.
    std::optional<double> lambda0;
    // Beta prior on the driver proportion.
    std::pair<double, double> pi_prior{1.0, 1.0};
    int iterations = 20000;
    int burn_in = 10000;
    int thin = 10;
    std::uint64_t seed = 1;
    // Normal(0, sd^2) prior on each log effect, restricted to the sum-zero
    // plane. Unset means flat, which is improper when a type or sample has
    // no mutations.
    std::optional<double> effect_prior_sd = 1.0;
    // Initial random-walk step on log effects.
    double proposal_scales = 0.1;
    // Adapt step sizes during burn-in (frozen afterwards).
    bool adapt = true;
    // Auxiliary clusters per non-conjugate reassignment.
    int aux_components = 3;

    // Hold a parameter fixed instead of sampling it; used for checking
    // conditional updates in isolation.
    std::optional<double> fixed_gamma;
    std::optional<double> fixed_pi;
    bool fix_effects = false;

    // Throws UsageError on an invalid combination.
    void validate() const;
    // Resolved Gamma prior for a dataset with the given crude rate.
    std::pair<double, double> resolved_gamma_prior(double crude_rate) const;
    std::size_t num_records() const;
};

ModelConfig parse_config(std::istream& in, const std::string& source = "<config>");
ModelConfig load_config(const std::filesystem::path& path);
// key=value lines in a fixed order; parse_config(to_text(c)) == c.
std::string to_text(const ModelConfig& config);

} // namespace hbmut
