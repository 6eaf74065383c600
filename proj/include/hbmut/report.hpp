#pragma once
// Command implementations behind the `hbmut` executable. Each command reads
// its inputs, writes its tables into an output directory together with a
// manifest.json, and reports failures by throwing the hbmut error types;
// exit_code() maps them to process exit codes.

#include "hbmut/dataset.hpp"
#include "hbmut/engine.hpp"

#include <exception>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hbmut {

namespace fs = std::filesystem;

// Reference passenger rates: low, intermediate, high.
inline constexpr double kLambda0Low = 2.07e-7;
inline constexpr double kLambda0Intermediate = 3.68e-7;
inline constexpr double kLambda0High = 5.30e-7;

struct DataArgs {
    fs::path counts;
    fs::path coverage;
    std::optional<fs::path> types;
};

struct FitArgs {
    DataArgs data;
    std::optional<fs::path> config;
    fs::path out;
    std::optional<std::uint64_t> seed;
    int chains = 1;
    std::optional<double> lambda0;
    // Hypothetical new sample for the predictive table.
    double predictive_beta = 1.0;
    double predictive_coverage_scale = 1.0;
};

struct SimulateArgs {
    fs::path out;
    std::uint64_t seed = 1;
    std::optional<std::size_t> genes;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> target_g;
    std::optional<double> lambda0;
    // Real coverage source (counts file supplies sample labels only).
    std::optional<DataArgs> coverage_source;
};

struct EvaluateArgs {
    DataArgs data;
    fs::path fit;
    fs::path truth;
    fs::path out;
    std::optional<fs::path> effects;
    std::optional<double> lambda0;
    std::size_t max_k = 200;
};

struct BaselineArgs {
    DataArgs data;
    fs::path out;
    std::optional<fs::path> config;
    std::optional<fs::path> effects;
    std::optional<double> lambda0;
};

void cmd_fit_rates(const FitArgs& args);
void cmd_fit_drivers(const FitArgs& args);
void cmd_simulate(const SimulateArgs& args);
void cmd_evaluate(const EvaluateArgs& args);
void cmd_baseline(const BaselineArgs& args);

// 2 usage, 3 parse or data validation, 4 numerical failure, 1 otherwise.
int exit_code(const std::exception& e);

// Per-type coverage of a hypothetical new sample: the mean over sample units
// with positive coverage, or 0 where the type was never sequenced.
std::vector<double> mean_sample_coverage(const MutationDataset& data, std::uint32_t gene);

// Mean over recorded draws of 1 - exp(-lambda_g beta_new sum_m alpha_m T_m).
double predictive_mutation_probability(const Trace& trace, const MutationDataset& data, std::uint32_t gene,
                                       std::optional<std::span<const double>> new_sample_coverage = std::nullopt,
                                       double new_sample_effect = 1.0);
// Same, by gene name; throws DataError for an unknown gene.
double predictive_mutation_probability(const Trace& trace, const MutationDataset& data, const std::string& gene,
                                       std::optional<std::span<const double>> new_sample_coverage = std::nullopt,
                                       double new_sample_effect = 1.0);

// Runs `chains` independent chains (chain index = stream id) concurrently.
std::vector<Trace> run_chains(const MutationDataset& data, const ModelConfig& config, ModelKind kind, int chains);

// FNV-1a of a file's bytes.
std::uint64_t file_hash(const fs::path& path);

} // namespace hbmut
