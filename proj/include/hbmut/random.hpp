#pragma once
// Seeded random streams. Every stream is derived from (seed, stream id) by a
// SplitMix64 hash, so adding a consumer never shifts another stream's draws.
// Distributions come from Boost.Random, whose algorithms are fixed in the
// headers and therefore identical across standard libraries.

#include <boost/random/mersenne_twister.hpp>

#include <cstdint>
#include <span>

namespace hbmut {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    double uniform();  // in (0, 1)
    double normal(double mean, double sd);
    double gamma(double shape, double rate);
    double beta(double a, double b);
    double exponential(double rate);
    std::int64_t poisson(double mean);
    std::uint64_t below(std::uint64_t n);  // uniform in [0, n)

    // Index drawn with probability proportional to exp(log_weights[i]).
    std::size_t categorical_log(std::span<const double> log_weights);

    boost::random::mt19937_64& engine() { return engine_; }

  private:
    boost::random::mt19937_64 engine_;
};

} // namespace hbmut
