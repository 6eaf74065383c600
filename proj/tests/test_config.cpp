#include "hbmut/config.hpp"
#include "hbmut/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace hbmut;

namespace {
ModelConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}
} // namespace

TEST_CASE("defaults") {
    ModelConfig c;
    CHECK(c.iterations == 20000);
    CHECK(c.burn_in == 10000);
    CHECK(c.thin == 10);
    CHECK(c.num_records() == 1000);
    CHECK(c.aux_components == 3);
    CHECK_FALSE(c.lambda0.has_value());
    CHECK(c.resolved_gamma_prior(2e-6) == std::pair<double, double>{1.0, 2e-6});
}

TEST_CASE("parse keys, comments and special values") {
    auto c = parse("# sampler\nconcentration = 2.5\nlambda0=3.68e-7\npi_prior=2,50\niterations=100\nburn_in=50\n"
                   "thin=5\nseed=42\ngamma_prior=2,1e-6\nadapt=false\neffect_prior_sd=none\n");
    CHECK(c.concentration == 2.5);
    CHECK(*c.lambda0 == 3.68e-7);
    CHECK(c.pi_prior == std::pair<double, double>{2.0, 50.0});
    CHECK(c.num_records() == 10);
    CHECK(c.seed == 42);
    CHECK(c.gamma_prior->second == 1e-6);
    CHECK_FALSE(c.adapt);
    CHECK_FALSE(c.effect_prior_sd.has_value());
}

TEST_CASE("text form round-trips") {
    auto c = parse("lambda0=2.07e-7\nfixed_pi=0.25\nfix_effects=true\niterations=300\nburn_in=100\n");
    auto back = parse(to_text(c));
    CHECK(to_text(back) == to_text(c));
    CHECK(*back.fixed_pi == 0.25);
    CHECK(back.fix_effects);
}

TEST_CASE("invalid configurations are usage errors") {
    CHECK_THROWS_AS(parse("lambda0=0\n"), UsageError);
    CHECK_THROWS_AS(parse("lambda0=-1e-7\n"), UsageError);
    CHECK_THROWS_AS(parse("burn_in=20000\n"), UsageError);
    CHECK_THROWS_AS(parse("thin=0\n"), UsageError);
    CHECK_THROWS_AS(parse("concentration=0\n"), UsageError);
    CHECK_THROWS_AS(parse("no_such_key=1\n"), UsageError);
    CHECK_THROWS_AS(parse("iterations=ten\n"), UsageError);
    CHECK_THROWS_AS(parse("just text\n"), UsageError);
}
