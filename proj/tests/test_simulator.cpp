#include "helpers.hpp"

#include "hbmut/errors.hpp"
#include "hbmut/simulator.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

using namespace hbmut;

namespace {

ScenarioSpec small_scenario(std::uint64_t seed, std::size_t genes = 500) {
    auto spec = default_scenario(seed);
    spec.num_genes = genes;
    return spec;
}

double expected_gene_count(const Simulation& sim, std::uint32_t g) {
    const auto& d = sim.data;
    double mu = 0.0;
    for (std::uint32_t m = 0; m < d.num_types(); ++m)
        for (std::uint32_t k = 0; k < d.num_samples(); ++k)
            mu += sim.alpha[m] * sim.beta[k] * static_cast<double>(d.coverage(g, m, k));
    return sim.true_lambda[g] * mu;
}

double log_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::log(x);
    return s;
}

} // namespace

TEST_CASE("tier counts by largest remainder") {
    const auto tiers = default_scenario().tiers;
    CHECK(tier_counts(tiers, 2000) == std::vector<std::size_t>{40, 20, 1});
    const auto full = tier_counts(tiers, 20671);
    CHECK(full == std::vector<std::size_t>{413, 207, 10});
    const double fraction = 630.0 / 20671.0;
    CHECK(fraction == doctest::Approx(0.0305).epsilon(0.002));
    for (std::size_t g : {1u, 7u, 99u, 1234u, 5000u}) {
        const auto c = tier_counts(tiers, g);
        CHECK(std::accumulate(c.begin(), c.end(), std::size_t{0}) <= g);
    }
}

TEST_CASE("desk scale keeps the scenario at full size and rejects bad targets") {
    const auto spec = default_scenario(3);
    const auto same = desk_scale(spec, spec.num_genes);
    CHECK(same.num_genes == spec.num_genes);
    CHECK(same.tiers.size() == spec.tiers.size());
    CHECK(desk_scale(spec, 2000).num_genes == 2000);
    CHECK_THROWS_AS(desk_scale(spec, spec.num_genes + 1), UsageError);
    // 0.05% of 500 genes rounds to nothing.
    CHECK_THROWS_AS(desk_scale(spec, 500), UsageError);
}

TEST_CASE("default effects lie on the constraint surface") {
    const auto alpha = default_type_effects(default_type_catalogue());
    CHECK(std::abs(log_sum(alpha)) < 1e-10);
    const auto& cat = default_type_catalogue();
    const auto cpg = std::find(cat.begin(), cat.end(), "C_in_CpG->T") - cat.begin();
    const auto tv = std::find(cat.begin(), cat.end(), "C_in_CpG->A") - cat.begin();
    CHECK(alpha[cpg] / alpha[tv] == doctest::Approx(10.0));
    CHECK(alpha.back() / alpha[tv] == doctest::Approx(0.5));
    const auto beta = lognormal_sample_effects(24, 0.5, 9);
    CHECK(std::abs(log_sum(beta)) < 1e-10);
}

TEST_CASE("simulation is byte-for-byte deterministic in the seed") {
    testing::TempDir dir;
    auto write = [&](const Simulation& s, const std::string& tag) {
        write_dataset(s.data, dir / ("counts" + tag), dir / ("cov" + tag));
        write_truth(s, dir / ("truth" + tag));
        write_effects(s.data, s.alpha, s.beta, dir / ("eff" + tag));
    };
    write(generate(small_scenario(5)), "a");
    write(generate(small_scenario(5)), "b");
    write(generate(small_scenario(6)), "c");
    for (const std::string f : {"counts", "cov", "truth", "eff"})
        CHECK(testing::read_file(dir / (f + "a")) == testing::read_file(dir / (f + "b")));
    CHECK(testing::read_file(dir / "countsa") != testing::read_file(dir / "countsc"));
}

TEST_CASE("planted drivers follow the tiers") {
    const auto sim = generate(desk_scale(default_scenario(2), 2000));
    CHECK(sim.data.num_genes() == 2000);
    CHECK(sim.data.num_samples() == 24);
    CHECK(sim.data.num_types() == 25);
    std::map<double, int> by_multiplier;
    for (std::size_t g = 0; g < 2000; ++g) {
        ++by_multiplier[sim.multiplier[g]];
        CHECK(sim.is_driver[g] == (sim.multiplier[g] > 1.0 ? 1 : 0));
        CHECK(sim.true_lambda[g] == doctest::Approx(3.68e-7 * sim.multiplier[g]));
    }
    CHECK(by_multiplier[10.0] == 40);
    CHECK(by_multiplier[30.0] == 20);
    CHECK(by_multiplier[200.0] == 1);
    CHECK(by_multiplier[1.0] == 1939);
    CHECK(sim.data.gene_name(0) == "G00001");
}

TEST_CASE("totals match their expectation across seeds") {
    double observed = 0.0, expected = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto sim = generate(small_scenario(seed));
        double e = 0.0;
        for (std::uint32_t g = 0; g < sim.data.num_genes(); ++g) e += expected_gene_count(sim, g);
        const double x = static_cast<double>(sim.data.total_count());
        CHECK(std::abs(x - e) < 4.0 * std::sqrt(e));
        observed += x;
        expected += e;
    }
    CHECK(std::abs(observed - expected) < 4.0 * std::sqrt(expected));
}

TEST_CASE("passenger counts pass a chi-square goodness-of-fit test") {
    // Per-gene totals binned at 0..4 and 5+, pooled over 20 seeds.
    const int bins = 6;
    std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto spec = small_scenario(seed);
        spec.lambda0 = 2e-5;
        const auto sim = generate(spec);
        for (std::uint32_t g = 0; g < sim.data.num_genes(); ++g) {
            if (sim.is_driver[g]) continue;
            const double mu = expected_gene_count(sim, g);
            const auto x = sim.data.gene_count(g);
            observed[std::min<std::int64_t>(x, bins - 1)] += 1.0;
            double cum = 0.0, term = std::exp(-mu);
            for (int b = 0; b < bins - 1; ++b) {
                expected[b] += term;
                cum += term;
                term *= mu / (b + 1);
            }
            expected[bins - 1] += 1.0 - cum;
        }
    }
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        REQUIRE(expected[b] >= 5.0);
        chi2 += (observed[b] - expected[b]) * (observed[b] - expected[b]) / expected[b];
    }
    const boost::math::chi_squared dist(bins - 1);
    CHECK(chi2 < boost::math::quantile(dist, 0.99));
}

TEST_CASE("multipliers of one plant no drivers") {
    auto spec = small_scenario(4, 200);
    spec.tiers = {{0.1, 1.0}};
    const auto sim = generate(spec);
    CHECK(std::count(sim.is_driver.begin(), sim.is_driver.end(), 1) == 0);
    for (double l : sim.true_lambda) CHECK(l == spec.lambda0);
    testing::TempDir dir;
    write_truth(sim, dir / "truth.tsv");
    const auto truth = load_truth(dir / "truth.tsv");
    CHECK(truth.genes.size() == 200);
    CHECK(std::count(truth.multiplier.begin(), truth.multiplier.end(), 1.0) == 200);
}

TEST_CASE("multipliers below one are rejected") {
    auto spec = small_scenario(4, 200);
    spec.tiers = {{0.1, 0.5}};
    CHECK_THROWS_AS(generate(spec), UsageError);
}

TEST_CASE("truth and effects files round-trip") {
    const auto sim = generate(small_scenario(8, 300));
    testing::TempDir dir;
    write_truth(sim, dir / "truth.tsv");
    write_effects(sim.data, sim.alpha, sim.beta, dir / "effects.tsv");
    const auto truth = load_truth(dir / "truth.tsv");
    for (std::uint32_t g = 0; g < 300; ++g) {
        CHECK(truth.genes[g] == sim.data.gene_name(g));
        CHECK(truth.true_lambda[g] == sim.true_lambda[g]);
        CHECK(truth.is_driver[g] == sim.is_driver[g]);
    }
    const auto eff = load_effects(dir / "effects.tsv", sim.data);
    CHECK(eff.alpha == sim.alpha);
    CHECK(eff.beta == sim.beta);
}

TEST_CASE("simulation on supplied coverage") {
    DatasetBuilder b({"x->y", "indel"});
    for (int g = 0; g < 30; ++g) b.add_gene("gene" + std::to_string(g));
    b.add_sample("p1");
    b.add_sample("p2");
    for (std::uint32_t g = 0; g < 30; ++g) {
        b.add_broadcast_coverage(g, 0, 1000 + g);
        b.add_coverage(g, 1, 0, 2000);
        b.add_coverage(g, 1, 1, 500 + g);
    }
    auto src = std::make_shared<const MutationDataset>(std::move(b).build());
    auto spec = scenario_from_coverage(src, 3);
    spec.tiers = {{0.2, 10.0}};
    spec.lambda0 = 1e-4;
    const auto small = desk_scale(spec, 10);
    REQUIRE(small.real_genes.size() == 10);
    CHECK(std::is_sorted(small.real_genes.begin(), small.real_genes.end()));
    CHECK(std::set<std::uint32_t>(small.real_genes.begin(), small.real_genes.end()).size() == 10);
    const auto sim = generate(small);
    CHECK(sim.data.num_genes() == 10);
    CHECK(sim.data.samples()[1].label == "p2");
    CHECK(std::count(sim.is_driver.begin(), sim.is_driver.end(), 1) == 2);
    for (std::uint32_t i = 0; i < 10; ++i) {
        const auto g = small.real_genes[i];
        CHECK(sim.data.gene_name(i) == src->gene_name(g));
        for (std::uint32_t m = 0; m < 2; ++m)
            for (std::uint32_t k = 0; k < 2; ++k) CHECK(sim.data.coverage(i, m, k) == src->coverage(g, m, k));
    }
}
