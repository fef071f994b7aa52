#include "enmod/rng.hpp"

#include <cmath>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace enmod {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

CounterRng::result_type CounterRng::operator()() noexcept {
    // Weyl sequence over the counter, keyed per stream.
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

double CounterRng::uniform() noexcept {
    // 53 random bits, shifted by half an ulp so 0 is never produced.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    boost::random::normal_distribution<double> dist;
    return dist(*this);
}

std::complex<double> CounterRng::complex_normal(double variance) {
    const double scale = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {scale * re, scale * im};
}

double CounterRng::gamma(double shape, double scale) {
    boost::random::gamma_distribution<double> dist(shape, scale);
    return dist(*this);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
    boost::random::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
    return dist(*this);
}

}  // namespace enmod
