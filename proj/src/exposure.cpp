#include "hbmut/exposure.hpp"

#include <algorithm>
#include <map>

namespace hbmut {

ExposureCache ExposureCache::rebuild(const MutationDataset& data, std::span<const double> alpha,
                                     std::span<const double> beta) {
    ExposureCache c;
    const auto G = data.num_genes();
    c.gene_totals_ = &data.gene_counts();
    c.type_totals_ = &data.type_counts();
    c.sample_totals_ = &data.sample_counts();

    c.set_beta_sum_.assign(data.num_sample_sets(), 0.0);
    for (std::uint32_t s = 0; s < data.num_sample_sets(); ++s)
        for (auto k : data.sample_set(s)) c.set_beta_sum_[s] += beta[k];

    c.exposure_.assign(G, 0.0);
    c.row_entry_.resize(data.coverage_rows().size());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> seen; // (set, entry) for the current gene
    std::uint32_t row_index = 0;
    for (std::uint32_t g = 0; g < G; ++g) {
        seen.clear();
        double e = 0.0;
        for (const auto& r : data.gene_rows(g)) {
            const double w = alpha[r.type] * static_cast<double>(r.coverage);
            e += w * c.set_beta_sum_[r.sample_set];
            auto it = std::find_if(seen.begin(), seen.end(), [&](auto& p) { return p.first == r.sample_set; });
            std::uint32_t entry;
            if (it == seen.end()) {
                entry = static_cast<std::uint32_t>(c.gene_set_weight_.size());
                seen.emplace_back(r.sample_set, entry);
                c.gene_set_weight_.push_back(0.0);
                c.gene_set_gene_.push_back(g);
                c.gene_set_set_.push_back(r.sample_set);
            } else {
                entry = it->second;
            }
            c.gene_set_weight_[entry] += w;
            c.row_entry_[row_index++] = entry;
        }
        c.exposure_[g] = e;
    }
    return c;
}

void ExposureCache::update_type_effect(const MutationDataset& data, std::uint32_t m, double old_value,
                                       double new_value) {
    const double delta = new_value - old_value;
    if (delta == 0.0) return;
    const auto rows = data.coverage_rows();
    for (auto i : data.type_rows(m)) {
        const auto& r = rows[i];
        const double dw = delta * static_cast<double>(r.coverage);
        exposure_[r.gene] += dw * set_beta_sum_[r.sample_set];
        gene_set_weight_[row_entry_[i]] += dw;
    }
}

void ExposureCache::update_sample_effect(const MutationDataset& data, std::uint32_t k, double old_value,
                                         double new_value) {
    const double delta = new_value - old_value;
    if (delta == 0.0) return;
    auto sets = data.sets_containing(k);
    if (sets.empty()) return;
    for (auto s : sets) set_beta_sum_[s] += delta;
    if (sets.size() == 1) {
        const auto s = sets.front();
        for (std::size_t e = 0; e < gene_set_weight_.size(); ++e)
            if (gene_set_set_[e] == s) exposure_[gene_set_gene_[e]] += delta * gene_set_weight_[e];
        return;
    }
    for (std::size_t e = 0; e < gene_set_weight_.size(); ++e)
        if (std::binary_search(sets.begin(), sets.end(), gene_set_set_[e]))
            exposure_[gene_set_gene_[e]] += delta * gene_set_weight_[e];
}

void ExposureCache::scale_type_effects(double factor) {
    for (auto& e : exposure_) e *= factor;
    for (auto& w : gene_set_weight_) w *= factor;
}

void ExposureCache::scale_sample_effects(double factor) {
    for (auto& e : exposure_) e *= factor;
    for (auto& b : set_beta_sum_) b *= factor;
}

} // namespace hbmut
