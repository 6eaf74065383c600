#pragma once
// One-gene-at-a-time comparators: Poisson MLE with exposure offset, the
// right-tail likelihood-ratio p-value against a passenger-rate null,
// Benjamini-Hochberg adjustment, and FDR curves for ranked gene lists.

#include "hbmut/dataset.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hbmut {

struct GeneTestResult {
    std::uint32_t gene = 0;
    std::int64_t count = 0;
    double exposure = 0.0;
    std::optional<double> mle_rate;
    double p_value = 1.0;
    double bh_adjusted = 1.0;
};

// X / E; empty when E = 0.
std::optional<double> mle_rate(std::int64_t count, double exposure);

// P(X >= count) for X ~ Poisson(null_mean).
double lrt_pvalue(std::int64_t count, double null_mean);

// Step-up adjusted values q_(i) = min_{j >= i} m p_(j) / j, capped at 1,
// in input order. Ties are ordered by (p, input index).
std::vector<double> bh_fdr(std::span<const double> p_values);

// For each list size k: mean of (1 - p_driver) over the top-k genes ranked
// by descending p_driver (ties by gene id). Throws UsageError if k > size.
std::vector<double> bayes_fdr_curve(std::span<const double> p_driver, std::span<const std::size_t> list_sizes);

// For each list size k: fraction of passengers among the first k entries of
// `ranking` (gene ids).
std::vector<double> true_fdr_curve(std::span<const std::size_t> ranking, std::span<const std::uint8_t> is_driver,
                                   std::span<const std::size_t> list_sizes);

// BH-estimated FDR of the top-k list ranked by ascending p-value: the
// adjusted value of the k-th gene in that order.
std::vector<double> bh_fdr_curve(std::span<const double> p_values, std::span<const std::size_t> list_sizes);
// Gene ids by ascending p-value (ties by id).
std::vector<std::size_t> pvalue_ranking(std::span<const double> p_values);

// Per-gene test against Poisson(lambda0 E_g) with plug-in effects.
std::vector<GeneTestResult> run_baseline(const MutationDataset& data, std::span<const double> alpha,
                                         std::span<const double> beta, double lambda0);

} // namespace hbmut
