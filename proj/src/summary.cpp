#include "hbmut/summary.hpp"

#include "hbmut/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hbmut {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DataError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double batch_means_mcse(std::span<const double> draws) {
    const std::size_t n = draws.size();
    if (n < 4) return std::numeric_limits<double>::infinity();
    const auto batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const std::size_t len = n / batches;
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) means[b] = mean(draws.subspan(b * len, len));
    const double overall = mean(means);
    double ss = 0.0;
    for (double m : means) ss += (m - overall) * (m - overall);
    const double var_batch = ss / static_cast<double>(batches - 1);
    return std::sqrt(var_batch / static_cast<double>(batches));
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
    std::vector<std::span<const double>> halves;
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& c : chains) len = std::min(len, c.size() / 2);
    if (chains.empty() || len < 2) return std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : chains) {
        std::span<const double> s(c);
        halves.push_back(s.subspan(0, len));
        halves.push_back(s.subspan(s.size() - len, len));
    }
    const double n = static_cast<double>(len);
    std::vector<double> means, vars;
    for (auto h : halves) {
        const double m = mean(h);
        double ss = 0.0;
        for (double x : h) ss += (x - m) * (x - m);
        means.push_back(m);
        vars.push_back(ss / (n - 1.0));
    }
    const double grand = mean(means);
    double b = 0.0;
    for (double m : means) b += (m - grand) * (m - grand);
    b *= n / static_cast<double>(means.size() - 1);
    const double w = mean(vars);
    if (w <= 0.0) return b <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    const double var_plus = (n - 1.0) / n * w + b / n;
    return std::sqrt(var_plus / w);
}

double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = cdf(draws[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

std::vector<std::size_t> order_descending(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
    return order;
}

std::vector<std::size_t> ranks_descending(std::span<const double> values) {
    const auto order = order_descending(values);
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) ranks[order[i]] = i + 1;
    return ranks;
}

} // namespace hbmut
