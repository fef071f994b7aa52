#include "enmod/design.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "enmod/errors.hpp"
#include "enmod/gray.hpp"
#include "enmod/rates.hpp"

namespace enmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRootBits = 48;
// Largest exponent the bracket growth will try before declaring t unbounded.
constexpr double kMaxExponent = 1e12;

template <class F>
double bracketed_root(F&& f, double lo, double hi) {
    boost::math::tools::eps_tolerance<double> tol(kRootBits);
    std::uintmax_t iterations = 300;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
    return 0.5 * (a + b);
}

// Smallest p > start with f(p) >= 0, where f(start) < 0 and f eventually
// increases. The bracket grows geometrically from `step`.
template <class F>
std::optional<double> first_crossing(F&& f, double start, double step) {
    double lo = start;
    step = std::max(step, 1e-12 * (1.0 + start));
    for (int i = 0; i < 200; ++i) {
        const double hi = start + step;
        const double value = f(hi);
        if (value >= 0.0) return value == 0.0 ? hi : bracketed_root(f, lo, hi);
        lo = hi;
        step *= 2.0;
        if (!std::isfinite(hi) || hi > 1e15) break;
    }
    return std::nullopt;
}

double mean_of(const Construction& c) { return c.mean_power(); }

template <class Build>
DesignOutcome bisect(Build&& build, const DesignConfig& cfg, double sigma2_design) {
    cfg.validate();
    const double budget = cfg.power_budget;
    auto power = [](const std::optional<Construction>& c) { return c ? mean_of(*c) : kInf; };

    DesignOutcome out;
    int iterations = 0;

    double t_l = cfg.tolerance;
    std::optional<Construction> best = build(t_l);
    ++iterations;
    if (!(power(best) < budget)) {
        out.feasible = false;
        out.diagnostics.iterations = iterations;
        return out;
    }

    // No finite upper bound is known a priori; double until infeasible.
    double t_u = 2.0 * t_l;
    while (t_u < kMaxExponent) {
        auto c = build(t_u);
        ++iterations;
        if (!(power(c) < budget)) break;
        t_l = t_u;
        best = std::move(c);
        t_u *= 2.0;
    }

    while (iterations < cfg.max_iterations) {
        if (t_u - t_l < cfg.tolerance && budget - power(best) < cfg.tolerance) break;
        const double t = 0.5 * (t_l + t_u);
        if (t <= t_l || t >= t_u) break;
        auto c = build(t);
        ++iterations;
        if (power(c) < budget) {
            t_l = t;
            best = std::move(c);
        } else {
            t_u = t;
        }
    }

    out.feasible = true;
    out.t_star = t_l;
    out.constellation = Constellation(best->levels, best->boundaries, sigma2_design);
    out.diagnostics.right_exponents = best->right_exponents;
    out.diagnostics.left_exponents = best->left_exponents;
    out.diagnostics.mean_power = best->mean_power();
    out.diagnostics.iterations = iterations;
    return out;
}

double variance(double alpha1, double sigma2, double p) {
    return alpha1 * p * p + 2.0 * sigma2 * p + sigma2 * sigma2;
}

}  // namespace

void DesignConfig::validate() const {
    detail::require(levels >= 2, "constellation size must be at least 2");
    detail::require(power_budget > 0.0 && std::isfinite(power_budget), "power budget must be positive");
    detail::require(tolerance > 0.0 && tolerance < 1.0, "tolerance must lie in (0, 1)");
    detail::require(max_iterations > 0, "iteration cap must be positive");
}

void UncertaintyBox::validate() const {
    detail::require(alpha_min >= 0.0 && alpha_min <= alpha_max && std::isfinite(alpha_max),
                    "need 0 <= alpha_min <= alpha_max");
    detail::require(sigma_min > 0.0 && sigma_min <= sigma_max && std::isfinite(sigma_max),
                    "need 0 < sigma_min <= sigma_max");
}

UncertaintyBox UncertaintyBox::point(double alpha1, double sigma2) {
    const double sigma = std::sqrt(sigma2);
    return {alpha1, alpha1, sigma, sigma};
}

UncertaintyBox UncertaintyBox::around_rician(double k_db, double snr_db, double half_width_db) {
    detail::require(half_width_db >= 0.0, "uncertainty half-width must be nonnegative");
    UncertaintyBox box{kInf, -kInf, kInf, -kInf};
    for (double dk : {-half_width_db, half_width_db}) {
        for (double dg : {-half_width_db, half_width_db}) {
            const double a = ChannelSpec::rician_db(k_db + dk).alpha1();
            const double s = std::sqrt(sigma2_from_snr(snr_db + dg));
            box.alpha_min = std::min(box.alpha_min, a);
            box.alpha_max = std::max(box.alpha_max, a);
            box.sigma_min = std::min(box.sigma_min, s);
            box.sigma_max = std::max(box.sigma_max, s);
        }
    }
    return box;
}

double Construction::mean_power() const {
    return std::accumulate(levels.begin(), levels.end(), 0.0) / static_cast<double>(levels.size());
}

ExactRateModel::ExactRateModel(ChannelSpec channel, double sigma2)
    : channel_(std::move(channel)), sigma2_(sigma2) {
    if (!channel_.samplable()) throw NotSamplable();
    detail::require(sigma2 > 0.0 && std::isfinite(sigma2), "noise power must be positive");
}

double ExactRateModel::right_deviation(double power, double t) const {
    return RateOracle(channel_, sigma2_, power).inverse(Side::Right, t);
}

double ExactRateModel::right_exponent(double power, double d) const {
    return RateOracle(channel_, sigma2_, power).right(d);
}

double ExactRateModel::left_exponent(double power, double d) const {
    return RateOracle(channel_, sigma2_, power).left(d);
}

QuadraticRateModel::QuadraticRateModel(double alpha1, double sigma2) : alpha1_(alpha1), sigma2_(sigma2) {
    detail::require(alpha1 >= 0.0 && std::isfinite(alpha1), "alpha1 must be nonnegative");
    detail::require(sigma2 > 0.0 && std::isfinite(sigma2), "noise power must be positive");
}

double QuadraticRateModel::right_deviation(double power, double t) const {
    return std::sqrt(2.0 * t * variance(alpha1_, sigma2_, power));
}

double QuadraticRateModel::right_exponent(double power, double d) const {
    return approx_rate(variance(alpha1_, sigma2_, power), d);
}

double QuadraticRateModel::left_exponent(double power, double d) const {
    return approx_rate(variance(alpha1_, sigma2_, power), d);
}

std::optional<Construction> construct_exact(const RateModel& model, int levels, double t) {
    detail::require(levels >= 1, "constellation size must be positive");
    detail::require(t > 0.0, "target exponent must be positive");
    const double sigma2 = model.sigma2();
    Construction c;
    c.levels.push_back(0.0);
    for (int k = 0; k + 1 < levels; ++k) {
        const double p = c.levels.back();
        const double d_right = model.right_deviation(p, t);
        // Next level's left margin is measured from the shared boundary.
        const double base = p + d_right;
        auto shortfall = [&](double q) { return model.left_exponent(q, q - base) - t; };
        const auto next = first_crossing(shortfall, base, d_right);
        if (!next) return std::nullopt;
        c.boundaries.push_back(p + sigma2 + d_right);
        c.right_exponents.push_back(model.right_exponent(p, d_right));
        c.left_exponents.push_back(model.left_exponent(*next, *next - base));
        c.levels.push_back(*next);
    }
    return c;
}

std::optional<Construction> construct_moments(double alpha1, double sigma2, int levels, double t) {
    detail::require(levels >= 1, "constellation size must be positive");
    detail::require(t > 0.0, "target exponent must be positive");
    const double tau = std::sqrt(2.0 * t);
    // Asymptotic slope of the gap condition; no next level once it is spent.
    if (tau * std::sqrt(alpha1) >= 1.0 && levels > 1) return std::nullopt;

    Construction c;
    c.levels.push_back(0.0);
    for (int k = 0; k + 1 < levels; ++k) {
        const double p = c.levels.back();
        const double spread = tau * std::sqrt(variance(alpha1, sigma2, p));
        auto gap = [&](double q) {
            return q - p - tau * (std::sqrt(variance(alpha1, sigma2, q))) - spread;
        };
        const auto next = first_crossing(gap, p, spread);
        if (!next) return std::nullopt;
        const double q = *next;
        c.boundaries.push_back(p + sigma2 + spread);
        c.right_exponents.push_back(t);
        c.left_exponents.push_back(approx_rate(variance(alpha1, sigma2, q), q - p - spread));
        c.levels.push_back(q);
    }
    return c;
}

namespace {

// sup over x = sigma^2 in [x_lo, x_hi] of tau sqrt(alpha p^2 + 2 x p + x^2) - x.
// Candidates: both endpoints plus the stationary point of
// (tau^2 - 1)(p + x)^2 = (alpha - 1) p^2 when it falls inside.
double robust_upper_spread(double tau, double alpha, double x_lo, double x_hi, double p,
                           double* arg = nullptr) {
    auto value = [&](double x) { return tau * std::sqrt(variance(alpha, x, p)) - x; };
    double best_x = x_lo;
    double best = value(x_lo);
    auto consider = [&](double x) {
        const double v = value(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    };
    consider(x_hi);
    const double denom = tau * tau - 1.0;
    if (denom != 0.0 && p > 0.0) {
        const double ratio = (alpha - 1.0) / denom;
        if (ratio > 0.0) {
            const double x = p * std::sqrt(ratio) - p;
            if (x > x_lo && x < x_hi) consider(x);
        }
    }
    if (arg) *arg = best_x;
    return best;
}

}  // namespace

std::optional<Construction> construct_robust(const UncertaintyBox& box, int levels, double t) {
    box.validate();
    detail::require(levels >= 1, "constellation size must be positive");
    detail::require(t > 0.0, "target exponent must be positive");
    const double tau = std::sqrt(2.0 * t);
    const double alpha = box.alpha_max;  // s_f increases with alpha1
    const double x_lo = box.sigma_min * box.sigma_min;
    const double x_hi = box.sigma_max * box.sigma_max;
    if (tau * std::sqrt(alpha) >= 1.0 && levels > 1) return std::nullopt;

    Construction c;
    c.levels.push_back(0.0);
    for (int k = 0; k + 1 < levels; ++k) {
        const double p = c.levels.back();
        // Both terms of the lower-side sup increase with sigma.
        const double spread = tau * std::sqrt(variance(alpha, x_hi, p));
        const double boundary = p + x_hi + spread;
        auto slack = [&](double q) { return q - boundary - robust_upper_spread(tau, alpha, x_lo, x_hi, q); };
        const auto next = first_crossing(slack, p, spread);
        if (!next) return std::nullopt;
        const double q = *next;
        double worst_x = x_lo;
        robust_upper_spread(tau, alpha, x_lo, x_hi, q, &worst_x);
        c.boundaries.push_back(boundary);
        c.right_exponents.push_back(approx_rate(variance(alpha, x_hi, p), boundary - p - x_hi));
        c.left_exponents.push_back(
            approx_rate(variance(alpha, worst_x, q), std::max(q + worst_x - boundary, 0.0)));
        c.levels.push_back(q);
    }
    return c;
}

DesignOutcome design_with_model(const RateModel& model, const DesignConfig& cfg) {
    return bisect([&](double t) { return construct_exact(model, cfg.levels, t); }, cfg, model.sigma2());
}

DesignOutcome design_exact(const ChannelSpec& channel, double sigma2, const DesignConfig& cfg) {
    const ExactRateModel model(channel, sigma2);
    return design_with_model(model, cfg);
}

DesignOutcome design_moments(double alpha1, double sigma2, const DesignConfig& cfg) {
    detail::require(alpha1 >= 0.0 && std::isfinite(alpha1), "alpha1 must be nonnegative");
    detail::require(sigma2 > 0.0 && std::isfinite(sigma2), "noise power must be positive");
    return bisect([&](double t) { return construct_moments(alpha1, sigma2, cfg.levels, t); }, cfg,
                  sigma2);
}

DesignOutcome design_robust(const UncertaintyBox& box, const DesignConfig& cfg) {
    box.validate();
    return bisect([&](double t) { return construct_robust(box, cfg.levels, t); }, cfg,
                  box.sigma_min * box.sigma_max);
}

Constellation min_distance_constellation(int levels, double sigma2) {
    detail::require(levels >= 2, "constellation size must be at least 2");
    detail::require(sigma2 >= 0.0 && std::isfinite(sigma2), "noise power must be nonnegative");
    const double span = static_cast<double>(levels - 1);
    std::vector<double> p(levels);
    std::vector<double> c(levels - 1);
    for (int k = 0; k < levels; ++k) p[k] = 2.0 * k / span;
    for (int k = 0; k + 1 < levels; ++k) c[k] = (2.0 * k + 1.0) / span + sigma2;
    p.back() = 2.0;
    return Constellation(std::move(p), std::move(c), sigma2);
}

Constellation ask_constellation(int levels) {
    detail::require(levels >= 2, "constellation size must be at least 2");
    const double l = static_cast<double>(levels);
    const double step2 = 6.0 / ((l - 1.0) * (2.0 * l - 1.0));
    std::vector<double> p(levels);
    for (int k = 0; k < levels; ++k) p[k] = step2 * static_cast<double>(k) * static_cast<double>(k);
    return Constellation::levels_only(std::move(p));
}

PamConstellation pam_constellation(int levels) {
    detail::require(levels >= 2 && (levels & (levels - 1)) == 0, "PAM size must be a power of two");
    PamConstellation pam;
    pam.bits = std::countr_zero(static_cast<unsigned>(levels));
    const double l = static_cast<double>(levels);
    const double step = std::sqrt(3.0 / (l * l - 1.0));
    for (int k = 0; k < levels; ++k) {
        pam.amplitudes.push_back((2.0 * k + 1.0 - l) * step);
        pam.labels.push_back(gray_map(static_cast<std::uint32_t>(k), pam.bits));
    }
    return pam;
}

}  // namespace enmod
