#pragma once
// Dirichlet-process partition bookkeeping: items (genes) map to clusters,
// each cluster carries one positive value. Clusters are indexed by creation
// order; emptied clusters are erased and later indices shift down.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hbmut {

class Partition {
  public:
    static constexpr int kUnassigned = -1;

    explicit Partition(std::size_t num_items = 0) : assignment_(num_items, kUnassigned) {}

    std::size_t num_items() const { return assignment_.size(); }
    std::size_t num_clusters() const { return values_.size(); }
    std::size_t num_assigned() const { return assigned_; }

    int cluster_of(std::uint32_t item) const { return assignment_[item]; }
    int size(std::size_t c) const { return sizes_[c]; }
    double value(std::size_t c) const { return values_[c]; }
    void set_value(std::size_t c, double v) { values_[c] = v; }
    std::span<const double> values() const { return values_; }
    std::span<const int> sizes() const { return sizes_; }
    std::span<const int> assignment() const { return assignment_; }

    // Opens a cluster holding only `item` (which must be unassigned).
    std::size_t open_cluster(std::uint32_t item, double value);
    void assign(std::uint32_t item, std::size_t c);
    // Unassigns `item`. When its cluster empties, the cluster is erased and
    // its value returned.
    std::optional<double> remove(std::uint32_t item);

    // Sizes match assignment counts and no cluster is empty.
    bool consistent() const;

  private:
    std::vector<int> assignment_;
    std::vector<double> values_;
    std::vector<int> sizes_;
    std::size_t assigned_ = 0;
};

} // namespace hbmut
