#include "hbmut/summary.hpp"

#include "hbmut/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace hbmut;

TEST_CASE("type 7 quantiles") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(quantile(v, 0.05) == doctest::Approx(5.95));
    CHECK(quantile(v, 0.95) == doctest::Approx(95.05));
    CHECK(quantile(v, 0.5) == doctest::Approx(50.5));
    CHECK(quantile({3.0}, 0.9) == 3.0);
    CHECK(quantile({4.0, 1.0}, 0.0) == 1.0);
    CHECK(quantile({4.0, 1.0}, 1.0) == 4.0);
}

TEST_CASE("ranks are descending with ties by index") {
    std::vector<double> v{0.5, 0.9, 0.5, 0.1};
    auto r = ranks_descending(v);
    CHECK(r == std::vector<std::size_t>{2, 1, 3, 4});
    auto o = order_descending(v);
    CHECK(o == std::vector<std::size_t>{1, 0, 2, 3});
}

TEST_CASE("batch-means standard error of iid draws") {
    Rng rng(3);
    std::vector<double> x(40000);
    for (auto& v : x) v = rng.normal(0.0, 1.0);
    // sd / sqrt(n) = 0.005; the batch estimate is itself noisy.
    CHECK(batch_means_mcse(x) == doctest::Approx(0.005).epsilon(0.3));
}

TEST_CASE("split R-hat near 1 for identical iid chains and large for shifted ones") {
    Rng rng(4);
    std::vector<std::vector<double>> same(4, std::vector<double>(1000));
    for (auto& c : same)
        for (auto& v : c) v = rng.normal(0.0, 1.0);
    CHECK(split_rhat(same) == doctest::Approx(1.0).epsilon(0.02));
    auto shifted = same;
    for (auto& v : shifted[0]) v += 5.0;
    CHECK(split_rhat(shifted) > 1.5);
    // A trend within one chain shows up through the split.
    std::vector<std::vector<double>> trend(1, std::vector<double>(1000));
    for (std::size_t i = 0; i < 1000; ++i) trend[0][i] = static_cast<double>(i) / 100.0 + rng.normal(0.0, 0.1);
    CHECK(split_rhat(trend) > 1.5);
}

TEST_CASE("KS distance of uniform draws") {
    Rng rng(8);
    std::vector<double> u(10000);
    for (auto& v : u) v = rng.uniform();
    CHECK(ks_distance(u, [](double x) { return x; }) < 0.02);
    CHECK(ks_distance(u, [](double x) { return x * x; }) > 0.2);
}
