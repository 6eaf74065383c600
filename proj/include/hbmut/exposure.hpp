#pragma once
// Effect-weighted coverage E[g] = sum_{m,k} alpha[m] beta[k] T[g,m,k], kept
// current while the type and sample effects move.

#include "hbmut/dataset.hpp"

#include <span>
#include <vector>

namespace hbmut {

class ExposureCache {
  public:
    ExposureCache() = default;

    // Full recomputation. Summation order is gene-major, then type, then
    // sample set, so the result is bit-reproducible for a given dataset.
    static ExposureCache rebuild(const MutationDataset& data, std::span<const double> alpha,
                                 std::span<const double> beta);

    // alpha[m] moved from old_value to new_value (other effects unchanged).
    void update_type_effect(const MutationDataset& data, std::uint32_t m, double old_value, double new_value);
    // beta[k] moved from old_value to new_value.
    void update_sample_effect(const MutationDataset& data, std::uint32_t k, double old_value, double new_value);
    // Every alpha (resp. beta) multiplied by the same factor.
    void scale_type_effects(double factor);
    void scale_sample_effects(double factor);

    double exposure(std::uint32_t g) const { return exposure_[g]; }
    std::span<const double> exposures() const { return exposure_; }
    // sum_{k in s} beta[k] for sample set s.
    double set_beta_sum(std::uint32_t s) const { return set_beta_sum_[s]; }
    std::span<const double> set_beta_sums() const { return set_beta_sum_; }

    std::int64_t gene_total(std::uint32_t g) const { return (*gene_totals_)[g]; }
    std::span<const std::int64_t> type_totals() const { return *type_totals_; }
    std::span<const std::int64_t> sample_totals() const { return *sample_totals_; }

  private:
    std::vector<double> exposure_;
    std::vector<double> set_beta_sum_;
    // Per (gene, sample set): sum over types of alpha[m] T. Stored as one
    // entry per coverage row's (gene, set) pair; row_entry_ maps rows to it.
    std::vector<double> gene_set_weight_;
    std::vector<std::uint32_t> gene_set_gene_;
    std::vector<std::uint32_t> gene_set_set_;
    std::vector<std::uint32_t> row_entry_;
    const std::vector<std::int64_t>* gene_totals_ = nullptr;
    const std::vector<std::int64_t>* type_totals_ = nullptr;
    const std::vector<std::int64_t>* sample_totals_ = nullptr;
};

} // namespace hbmut
