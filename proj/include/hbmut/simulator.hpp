#pragma once
// Synthetic studies with planted driver genes. Passenger genes mutate at
// lambda0; each driver tier multiplies lambda0 by a fixed factor. Counts are
// Poisson(lambda_g alpha_m beta_k T_gmk) per cell.

#include "hbmut/dataset.hpp"

#include <filesystem>
#include <memory>
#include <vector>

namespace hbmut {

struct DriverTier {
    double fraction = 0.0;
    double multiplier = 1.0;
};

// Gene lengths are log-normal; each point-mutation type gets the share of a
// gene's bases in its nucleotide context times the fraction of changes that
// alter the protein. Indel coverage is the gene length.
struct SyntheticCoverage {
    double median_length = 1500.0;
    double log_sd = 0.75;
    double nonsynonymous_fraction = 0.75;
    // Context class -> share of bases. Type labels are "<context>-><target>".
    std::vector<std::pair<std::string, double>> context_frequencies = {
        {"C_in_CpG", 0.025}, {"G_in_CpG", 0.025}, {"G_in_GpA", 0.06}, {"C_in_TpC", 0.06},
        {"A", 0.26},         {"Other_C", 0.155},  {"Other_G", 0.155}, {"T", 0.26},
    };
};

struct ScenarioSpec {
    std::size_t num_genes = 20671;
    std::size_t num_samples = 24;
    std::vector<std::string> type_labels = default_type_catalogue();
    double lambda0 = 3.68e-7;
    std::vector<DriverTier> tiers = {{0.02, 10.0}, {0.01, 30.0}, {0.0005, 200.0}};
    std::vector<double> alpha;  // one per type
    std::vector<double> beta;   // one per sample
    // When set, coverage (and genes, types, samples) come from this dataset;
    // its counts are ignored. `real_genes` restricts to a subset of its genes.
    std::shared_ptr<const MutationDataset> real_coverage;
    std::vector<std::uint32_t> real_genes;
    SyntheticCoverage synthetic;
    std::uint64_t seed = 1;

    // Throws UsageError.
    void validate() const;
};

// Published scenario on synthetic coverage with default effects.
ScenarioSpec default_scenario(std::uint64_t seed = 1);
// Same scenario on the coverage of an existing dataset.
ScenarioSpec scenario_from_coverage(std::shared_ptr<const MutationDataset> coverage, std::uint64_t seed = 1);

// Type effects with elevated transitions at CpG, geometric mean 1.
std::vector<double> default_type_effects(const std::vector<std::string>& type_labels);
// Log-normal(0, sd) sample effects rescaled to geometric mean 1.
std::vector<double> lognormal_sample_effects(std::size_t num_samples, double sd, std::uint64_t seed);

// Genes per tier by largest remainder over the tiers plus the passenger
// group; ties go to the earlier group, tiers before passengers.
std::vector<std::size_t> tier_counts(const std::vector<DriverTier>& tiers, std::size_t num_genes);

// Shrinks a scenario to target_g genes with the same tier fractions. With
// real coverage the genes are a seeded uniform subsample. Throws UsageError
// when target_g exceeds the gene count or leaves a tier empty.
ScenarioSpec desk_scale(const ScenarioSpec& spec, std::size_t target_g);

struct Simulation {
    MutationDataset data;
    std::vector<double> true_lambda;
    std::vector<double> multiplier;  // 1 for passengers
    std::vector<std::uint8_t> is_driver;
    std::vector<double> alpha;
    std::vector<double> beta;
};

Simulation generate(const ScenarioSpec& spec);

// gene, tier_multiplier, true_lambda, is_driver
void write_truth(const Simulation& sim, const std::filesystem::path& path);
// kind, label, value (kind is "type" or "sample")
void write_effects(const MutationDataset& data, std::span<const double> alpha, std::span<const double> beta,
                   const std::filesystem::path& path);

struct Truth {
    std::vector<std::string> genes;
    std::vector<double> multiplier;
    std::vector<double> true_lambda;
    std::vector<std::uint8_t> is_driver;
};
Truth load_truth(const std::filesystem::path& path);

struct Effects {
    std::vector<double> alpha;
    std::vector<double> beta;
};
// Values are matched to the dataset's type and sample labels.
Effects load_effects(const std::filesystem::path& path, const MutationDataset& data);

} // namespace hbmut
