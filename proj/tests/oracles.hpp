#pragma once
// Brute-force reference computations shared by the unit and acceptance tests.

#include "hbmut/dataset.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace oracle {

// One type, one sample; coverage and count per gene.
inline hbmut::MutationDataset genes_dataset(const std::vector<std::int64_t>& coverage, const std::vector<int>& counts) {
    hbmut::DatasetBuilder b({"t"});
    for (std::size_t g = 0; g < coverage.size(); ++g) b.add_gene("g" + std::to_string(g + 1));
    b.add_sample("s1");
    for (std::uint32_t g = 0; g < coverage.size(); ++g) {
        b.add_coverage(g, 0, 0, coverage[g]);
        if (counts[g] > 0) b.add_count(g, 0, 0, counts[g]);
    }
    return std::move(b).build();
}

inline double poisson_pmf(int x, double mu) { return std::exp(x * std::log(mu) - mu - std::lgamma(x + 1.0)); }

// Calls f with every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> labels;
    std::function<void(int)> rec = [&](int next) {
        if (static_cast<int>(labels.size()) == n) {
            f(labels);
            return;
        }
        for (int c = 0; c <= next; ++c) {
            labels.push_back(c);
            rec(std::max(next, c + 1));
            labels.pop_back();
        }
    };
    rec(0);
}

// Posterior P(delta_g = 1) in the driver model with fixed unit effects and
// fixed gamma, pi integrated against Beta(pa, pb). Sums over every
// indicator vector and every partition of the drivers; each cluster's
// increment is integrated numerically.
inline std::vector<double> driver_probabilities(const std::vector<std::int64_t>& cov, const std::vector<int>& x,
                                                double lambda0, double gamma, double a, double pa = 1.0,
                                                double pb = 1.0) {
    const int G = static_cast<int>(x.size());
    boost::math::quadrature::exp_sinh<double> integrator;
    auto cluster_marginal = [&](const std::vector<int>& members) {
        // theta = u / gamma turns the Exponential(gamma) density into e^{-u}.
        return integrator.integrate([&](double u) {
            double p = std::exp(-u);
            for (int g : members) p *= poisson_pmf(x[g], (lambda0 + u / gamma) * static_cast<double>(cov[g]));
            return p;
        });
    };
    std::vector<double> p_driver(G, 0.0);
    double total = 0.0;
    for (int mask = 0; mask < (1 << G); ++mask) {
        std::vector<int> drivers;
        double w = 1.0;
        for (int g = 0; g < G; ++g) {
            if (mask >> g & 1)
                drivers.push_back(g);
            else
                w *= poisson_pmf(x[g], lambda0 * static_cast<double>(cov[g]));
        }
        const int n1 = static_cast<int>(drivers.size());
        w *= boost::math::beta(pa + n1, pb + G - n1);
        double mixture = n1 == 0 ? 1.0 : 0.0;
        if (n1 > 0) {
            for_each_partition(n1, [&](const std::vector<int>& lab) {
                const int C = *std::max_element(lab.begin(), lab.end()) + 1;
                double pw = std::pow(a, C);
                for (int i = 0; i < n1; ++i) pw /= a + i;
                for (int c = 0; c < C; ++c) {
                    std::vector<int> members;
                    for (int i = 0; i < n1; ++i)
                        if (lab[i] == c) members.push_back(drivers[i]);
                    pw *= std::tgamma(static_cast<double>(members.size())) * cluster_marginal(members);
                }
                mixture += pw;
            });
        }
        w *= mixture;
        total += w;
        for (int g : drivers) p_driver[g] += w;
    }
    for (auto& p : p_driver) p /= total;
    return p_driver;
}

// P(X >= x) for X ~ Poisson(mu) by direct summation in long double.
inline long double poisson_tail(std::int64_t x, long double mu) {
    long double below = 0.0L;
    long double term = std::exp(-mu);
    for (std::int64_t i = 0; i < x; ++i) {
        below += term;
        term *= mu / static_cast<long double>(i + 1);
    }
    long double above = 0.0L;
    for (std::int64_t i = x; i < x + 1000; ++i) {
        above += term;
        term *= mu / static_cast<long double>(i + 1);
    }
    return x <= mu ? 1.0L - below : above;
}

// Step-up adjustment straight from its definition:
// q_i = min(1, min over p_j >= p_i (in rank order) of m p_j / rank_j).
inline std::vector<double> bh_step_up(const std::vector<double>& p) {
    const auto m = p.size();
    std::vector<std::size_t> rank(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = 1;
        for (std::size_t j = 0; j < m; ++j)
            if (p[j] < p[i] || (p[j] == p[i] && j < i)) ++r;
        rank[i] = r;
    }
    std::vector<double> q(m);
    for (std::size_t i = 0; i < m; ++i) {
        double best = 1.0;
        for (std::size_t j = 0; j < m; ++j)
            if (rank[j] >= rank[i])
                best = std::min(best, static_cast<double>(m) * p[j] / static_cast<double>(rank[j]));
        q[i] = best;
    }
    return q;
}

} // namespace oracle
