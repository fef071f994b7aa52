#include "enmod/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "enmod/errors.hpp"

namespace enmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaximizerBits = std::numeric_limits<double>::digits / 2;
constexpr int kRootBits = 46;

template <class F>
double bracketed_root(F&& f, double lo, double hi) {
    boost::math::tools::eps_tolerance<double> tol(kRootBits);
    std::uintmax_t iterations = 300;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
    return 0.5 * (a + b);
}

}  // namespace

RateOracle::RateOracle(ChannelSpec channel, double sigma2, double power)
    : channel_(std::move(channel)), sigma2_(sigma2), power_(power) {
    detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "noise power must be positive");
    detail::require(std::isfinite(power) && power >= 0.0, "power level must be nonnegative");
    theta_max_ = mgf_theta_max(channel_, sigma2_, power_);
    mean_energy_ = channel_.second_moment() * power_ + sigma2_;
    energy_variance_ = u_second_moment(channel_, sigma2_, power_);
}

double RateOracle::log_mgf(double theta) const {
    return log_mgf_energy(channel_, sigma2_, power_, theta);
}

// sup over theta in [0, upper) of theta d - log M(sign theta). The objective
// is concave, so a doubling search from the quadratic-approximation optimum
// d / E[U^2] brackets the maximizer before Brent's method refines it.
double RateOracle::supremum(double d, double sign, double upper) const {
    auto objective = [&](double theta) { return theta * d - log_mgf(sign * theta); };

    double b = std::min(d / energy_variance_, 0.5 * upper);
    double gb = objective(b);
    for (int i = 0; i < 2000; ++i) {
        const double next = 2.0 * b;
        if (next >= upper) {
            b = upper;
            break;
        }
        const double gn = objective(next);
        if (gn <= gb) {
            b = next;
            break;
        }
        b = next;
        gb = gn;
    }
    if (b == upper && std::isfinite(upper)) b = upper * (1.0 - 1e-13);

    auto negated = [&](double theta) { return -objective(theta); };
    std::uintmax_t iterations = 500;
    const auto [arg, value] =
        boost::math::tools::brent_find_minima(negated, 0.0, b, kMaximizerBits, iterations);
    (void)arg;
    return std::max(-value, 0.0);
}

double RateOracle::right(double d) const {
    detail::require(d >= 0.0, "deviation must be nonnegative");
    if (d == 0.0) return 0.0;
    if (std::isinf(d)) return kInf;
    return supremum(d, 1.0, theta_max_);
}

double RateOracle::left(double d) const {
    detail::require(d >= 0.0, "deviation must be nonnegative");
    if (d == 0.0) return 0.0;
    if (d >= mean_energy_) return kInf;
    return supremum(d, -1.0, kInf);
}

double RateOracle::inverse(Side side, double t) const {
    detail::require(t > 0.0 && std::isfinite(t), "target exponent must be positive and finite");
    auto f = [&](double d) { return rate(side, d) - t; };

    double lo = 0.0;
    double hi = std::sqrt(2.0 * t * energy_variance_);
    if (side == Side::Left) hi = std::min(hi, 0.5 * mean_energy_);
    for (int i = 0; i < 4000 && f(hi) < 0.0; ++i) {
        lo = hi;
        hi = side == Side::Right ? 2.0 * hi : 0.5 * (hi + mean_energy_);
    }
    if (side == Side::Left && !std::isfinite(rate(side, hi))) {
        // Approached r(p) to rounding; the finite root sits just below.
        return lo;
    }
    return bracketed_root(f, lo, hi);
}

double approx_rate(double s_p, double d) {
    detail::require(s_p > 0.0, "energy variance must be positive");
    detail::require(d >= 0.0, "deviation must be nonnegative");
    return d * d / (2.0 * s_p);
}

double equalize_boundary(const RateOracle& lower, const RateOracle& upper, double gap) {
    detail::require(gap > 0.0 && std::isfinite(gap), "level gap must be positive");
    auto difference = [&](double d) { return lower.right(d) - upper.left(gap - d); };
    return bracketed_root(difference, 0.0, gap);
}

std::vector<BoundaryExponents> boundary_exponents(const Constellation& constellation,
                                                  const ChannelSpec& channel, double sigma2) {
    detail::require(constellation.has_regions(), "constellation has no decoding regions");
    std::vector<BoundaryExponents> out;
    const auto levels = constellation.levels();
    const auto bounds = constellation.boundaries();
    out.reserve(bounds.size());
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const RateOracle below(channel, sigma2, levels[k]);
        const RateOracle above(channel, sigma2, levels[k + 1]);
        const double d_right = bounds[k] - below.mean_energy();
        const double d_left = above.mean_energy() - bounds[k];
        out.push_back({d_right > 0.0 ? below.right(d_right) : 0.0,
                       d_left > 0.0 ? above.left(d_left) : 0.0});
    }
    return out;
}

double chernoff_ser_bound(const Constellation& constellation, const ChannelSpec& channel,
                          double sigma2, int antennas) {
    detail::require(antennas >= 1, "antenna count must be at least 1");
    if (constellation.size() < 2) return 0.0;
    const double n = static_cast<double>(antennas);
    double sum = 0.0;
    for (const auto& e : boundary_exponents(constellation, channel, sigma2))
        sum += std::exp(-n * e.right) + std::exp(-n * e.left);
    return sum / static_cast<double>(constellation.size());
}

double error_exponent(const Constellation& constellation, const ChannelSpec& channel, double sigma2) {
    double worst = kInf;
    if (constellation.size() < 2) return worst;
    for (const auto& e : boundary_exponents(constellation, channel, sigma2))
        worst = std::min({worst, e.right, e.left});
    return worst;
}

double approx_error_exponent(const Constellation& constellation, double alpha1, double sigma2) {
    detail::require(constellation.has_regions(), "constellation has no decoding regions");
    double worst = kInf;
    const auto levels = constellation.levels();
    const auto bounds = constellation.boundaries();
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const double d_right = std::max(bounds[k] - (levels[k] + sigma2), 0.0);
        const double d_left = std::max(levels[k + 1] + sigma2 - bounds[k], 0.0);
        worst = std::min({worst, approx_rate(u_second_moment(alpha1, sigma2, levels[k]), d_right),
                          approx_rate(u_second_moment(alpha1, sigma2, levels[k + 1]), d_left)});
    }
    return worst;
}

Constellation equalize_regions(std::vector<double> levels, const ChannelSpec& channel,
                               double sigma2) {
    std::vector<double> bounds;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const RateOracle below(channel, sigma2, levels[k]);
        const RateOracle above(channel, sigma2, levels[k + 1]);
        const double d_right = equalize_boundary(below, above, levels[k + 1] - levels[k]);
        bounds.push_back(below.mean_energy() + d_right);
    }
    return Constellation(std::move(levels), std::move(bounds), sigma2);
}

}  // namespace enmod
