#pragma once
// Posterior summary statistics and chain diagnostics.

#include <functional>
#include <span>
#include <vector>

namespace hbmut {

// Linear interpolation between order statistics (the "type 7" rule):
// h = (n - 1) p, q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
double quantile(std::vector<double> values, double p);

double mean(std::span<const double> values);

// Monte-Carlo standard error of the mean by non-overlapping batch means
// (floor(sqrt(n)) batches).
double batch_means_mcse(std::span<const double> draws);

// Split-chain potential scale reduction factor over one or more chains.
double split_rhat(const std::vector<std::vector<double>>& chains);

// sup |F_n(x) - F(x)| of the empirical distribution of `draws` against cdf.
double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf);

// 1-based ranks by descending value; ties broken by ascending index.
std::vector<std::size_t> ranks_descending(std::span<const double> values);
// Indices sorted by descending value; ties by ascending index.
std::vector<std::size_t> order_descending(std::span<const double> values);

} // namespace hbmut
