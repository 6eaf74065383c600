#include "hbmut/random.hpp"

#include "hbmut/errors.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hbmut {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    return splitmix(splitmix(seed) ^ splitmix(stream + 0x632be59bd9b4e019ull));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

double Rng::uniform() {
    // 53 random bits, shifted off zero.
    const auto bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal(double mean, double sd) {
    if (sd == 0.0) return mean;
    boost::random::normal_distribution<double> dist(mean, sd);
    return dist(engine_);
}

double Rng::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw NumericalError("gamma draw with non-positive parameter");
    boost::random::gamma_distribution<double> dist(shape, 1.0 / rate);
    double x = dist(engine_);
    // Tiny shapes can underflow to zero; keep draws strictly positive.
    if (x <= 0.0) x = std::numeric_limits<double>::min();
    return x;
}

double Rng::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw NumericalError("beta draw with non-positive parameter");
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw NumericalError("exponential draw with non-positive rate");
    return -std::log(uniform()) / rate;
}

std::int64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    boost::random::poisson_distribution<std::int64_t, double> dist(mean);
    return dist(engine_);
}

std::uint64_t Rng::below(std::uint64_t n) {
    boost::random::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
}

std::size_t Rng::categorical_log(std::span<const double> log_weights) {
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(top)) throw NumericalError("categorical draw with no finite weight");
    double total = 0.0;
    for (double lw : log_weights) total += std::exp(lw - top);
    double u = uniform() * total;
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
        u -= std::exp(log_weights[i] - top);
        if (u <= 0.0) return i;
    }
    // Rounding: fall back to the last index with positive weight.
    for (std::size_t i = log_weights.size(); i-- > 0;)
        if (std::exp(log_weights[i] - top) > 0.0) return i;
    return log_weights.size() - 1;
}

} // namespace hbmut
