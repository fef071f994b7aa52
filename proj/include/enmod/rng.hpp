#pragma once

#include <complex>
#include <cstdint>
#include <limits>

namespace enmod {

/// Counter-based random stream.
///
/// Output number i of stream (seed, stream) is a pure function of the triple
/// (seed, stream, i), so any partition of streams across workers reproduces
/// the same draws. Satisfies UniformRandomBitGenerator, so Boost.Random
/// distributions can consume it; those are used instead of <random>
/// distributions because their algorithms are fixed across standard libraries.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double normal();
    /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);
    /// Gamma variate with the given shape and scale.
    double gamma(double shape, double scale);
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace enmod
