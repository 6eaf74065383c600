#include "hbmut/partition.hpp"

#include <cassert>

namespace hbmut {

std::size_t Partition::open_cluster(std::uint32_t item, double value) {
    assert(assignment_[item] == kUnassigned);
    values_.push_back(value);
    sizes_.push_back(1);
    assignment_[item] = static_cast<int>(values_.size() - 1);
    ++assigned_;
    return values_.size() - 1;
}

void Partition::assign(std::uint32_t item, std::size_t c) {
    assert(assignment_[item] == kUnassigned);
    assignment_[item] = static_cast<int>(c);
    ++sizes_[c];
    ++assigned_;
}

std::optional<double> Partition::remove(std::uint32_t item) {
    const int c = assignment_[item];
    if (c == kUnassigned) return std::nullopt;
    assignment_[item] = kUnassigned;
    --assigned_;
    if (--sizes_[c] > 0) return std::nullopt;
    const double v = values_[c];
    values_.erase(values_.begin() + c);
    sizes_.erase(sizes_.begin() + c);
    for (auto& a : assignment_)
        if (a > c) --a;
    return v;
}

bool Partition::consistent() const {
    std::vector<int> counts(values_.size(), 0);
    std::size_t assigned = 0;
    for (int a : assignment_) {
        if (a == kUnassigned) continue;
        if (a < 0 || static_cast<std::size_t>(a) >= values_.size()) return false;
        ++counts[a];
        ++assigned;
    }
    if (assigned != assigned_) return false;
    for (std::size_t c = 0; c < values_.size(); ++c)
        if (counts[c] == 0 || counts[c] != sizes_[c] || !(values_[c] > 0.0)) return false;
    return true;
}

} // namespace hbmut
