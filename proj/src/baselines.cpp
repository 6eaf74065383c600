#include "hbmut/baselines.hpp"

#include "hbmut/errors.hpp"
#include "hbmut/exposure.hpp"
#include "hbmut/summary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hbmut {

std::optional<double> mle_rate(std::int64_t count, double exposure) {
    if (!(exposure > 0.0)) return std::nullopt;
    return static_cast<double>(count) / exposure;
}

double lrt_pvalue(std::int64_t count, double null_mean) {
    if (count <= 0) return 1.0;
    if (!(null_mean > 0.0)) return 0.0;
    const double x = static_cast<double>(count);
    if (x <= null_mean) {
        // Complement of the lower tail, which is the smaller side here.
        double term = std::exp(-null_mean);
        double lower = term;
        for (std::int64_t j = 1; j < count; ++j) {
            term *= null_mean / static_cast<double>(j);
            lower += term;
        }
        return std::clamp(1.0 - lower, 0.0, 1.0);
    }
    // Upper tail summed from its largest term, P(X = count), downwards.
    double term = std::exp(x * std::log(null_mean) - null_mean - std::lgamma(x + 1.0));
    double upper = 0.0;
    for (double j = x; term > 0.0; j += 1.0) {
        upper += term;
        if (term < upper * 1e-17) break;
        term *= null_mean / (j + 1.0);
    }
    return std::clamp(upper, 0.0, 1.0);
}

std::vector<double> bh_fdr(std::span<const double> p_values) {
    const auto m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
    std::vector<double> q(m);
    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        const double v = static_cast<double>(m) * p_values[order[i]] / static_cast<double>(i + 1);
        running = std::min(running, v);
        q[order[i]] = std::min(running, 1.0);
    }
    return q;
}

std::vector<double> bayes_fdr_curve(std::span<const double> p_driver, std::span<const std::size_t> list_sizes) {
    const auto order = order_descending(p_driver);
    std::vector<double> cumulative(order.size() + 1, 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) cumulative[i + 1] = cumulative[i] + (1.0 - p_driver[order[i]]);
    std::vector<double> out;
    for (auto k : list_sizes) {
        if (k == 0 || k > order.size()) throw UsageError("list size " + std::to_string(k) + " outside 1..G");
        out.push_back(cumulative[k] / static_cast<double>(k));
    }
    return out;
}

std::vector<double> true_fdr_curve(std::span<const std::size_t> ranking, std::span<const std::uint8_t> is_driver,
                                   std::span<const std::size_t> list_sizes) {
    std::vector<double> cumulative(ranking.size() + 1, 0.0);
    for (std::size_t i = 0; i < ranking.size(); ++i)
        cumulative[i + 1] = cumulative[i] + (is_driver[ranking[i]] ? 0.0 : 1.0);
    std::vector<double> out;
    for (auto k : list_sizes) {
        if (k == 0 || k > ranking.size()) throw UsageError("list size " + std::to_string(k) + " outside 1..G");
        out.push_back(cumulative[k] / static_cast<double>(k));
    }
    return out;
}

std::vector<std::size_t> pvalue_ranking(std::span<const double> p_values) {
    std::vector<std::size_t> order(p_values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
    return order;
}

std::vector<double> bh_fdr_curve(std::span<const double> p_values, std::span<const std::size_t> list_sizes) {
    const auto q = bh_fdr(p_values);
    const auto order = pvalue_ranking(p_values);
    std::vector<double> out;
    for (auto k : list_sizes) {
        if (k == 0 || k > order.size()) throw UsageError("list size " + std::to_string(k) + " outside 1..G");
        out.push_back(q[order[k - 1]]);
    }
    return out;
}

std::vector<GeneTestResult> run_baseline(const MutationDataset& data, std::span<const double> alpha,
                                         std::span<const double> beta, double lambda0) {
    const auto cache = ExposureCache::rebuild(data, alpha, beta);
    std::vector<GeneTestResult> out(data.num_genes());
    std::vector<double> p(data.num_genes());
    for (std::uint32_t g = 0; g < data.num_genes(); ++g) {
        auto& r = out[g];
        r.gene = g;
        r.count = data.gene_count(g);
        r.exposure = cache.exposure(g);
        r.mle_rate = mle_rate(r.count, r.exposure);
        r.p_value = lrt_pvalue(r.count, lambda0 * r.exposure);
        p[g] = r.p_value;
    }
    const auto q = bh_fdr(p);
    for (std::uint32_t g = 0; g < data.num_genes(); ++g) out[g].bh_adjusted = q[g];
    return out;
}

} // namespace hbmut
