#include "enmod/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "enmod/errors.hpp"

namespace enmod {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kDebyeOrder = 50;

// GSL aborts on range errors by default; status codes are checked instead.
[[maybe_unused]] const gsl_error_handler_t* const kPreviousHandler = gsl_set_error_handler_off();

// Power series sum_k (x/2)^(2k+nu) / (k! (k+nu)!) accumulated in log space.
double log_bessel_i_series(int nu, double x) {
    const double log_half_x = std::log(0.5 * x);
    double log_sum = nu * log_half_x - std::lgamma(nu + 1.0);
    for (int k = 1; k < 100000; ++k) {
        const double term = (2.0 * k + nu) * log_half_x - std::lgamma(k + 1.0) - std::lgamma(k + nu + 1.0);
        const double delta = term - log_sum;
        log_sum += std::log1p(std::exp(delta));
        if (delta < -40.0 && k > 0.5 * x) break;
    }
    return log_sum;
}

}  // namespace

double log_bessel_i_debye(double nu, double x) {
    detail::require(nu > 0.0, "Debye expansion needs a positive order");
    detail::require(x >= 0.0, "Bessel argument must be nonnegative");
    if (x == 0.0) return kNegInf;
    const double z = x / nu;
    const double w = std::sqrt(1.0 + z * z);
    const double t = 1.0 / w;
    const double eta = w + std::log(z / (1.0 + w));
    const double t2 = t * t;

    const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
    const double u2 = t2 * (81.0 - 462.0 * t2 + 385.0 * t2 * t2) / 1152.0;
    const double u3 = t * t2 * (30375.0 - 369603.0 * t2 + 765765.0 * t2 * t2 - 425425.0 * t2 * t2 * t2) /
                      414720.0;
    const double u4 = t2 * t2 *
                      (4465125.0 - 94121676.0 * t2 + 349922430.0 * t2 * t2 -
                       446185740.0 * t2 * t2 * t2 + 185910725.0 * t2 * t2 * t2 * t2) /
                      39813120.0;
    const double inv = 1.0 / nu;
    const double series = 1.0 + inv * (u1 + inv * (u2 + inv * (u3 + inv * u4)));
    return nu * eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) - 0.5 * std::log(w) + std::log(series);
}

double log_bessel_i(int nu, double x) {
    detail::require(nu >= 0, "Bessel order must be nonnegative");
    detail::require(x >= 0.0, "Bessel argument must be nonnegative");
    if (x == 0.0) return nu == 0 ? 0.0 : kNegInf;
    if (nu > kDebyeOrder) return log_bessel_i_debye(nu, x);

    gsl_sf_result scaled;
    const int status = gsl_sf_bessel_In_scaled_e(nu, x, &scaled);
    if (status == GSL_SUCCESS && scaled.val > 1e-280) return std::log(scaled.val) + x;
    return log_bessel_i_series(nu, x);
}

double log_noncentral_chi2_pdf(double x, int k, double lambda) {
    detail::require(k >= 2 && k % 2 == 0, "degrees of freedom must be even and at least 2");
    detail::require(lambda >= 0.0, "noncentrality must be nonnegative");
    if (x < 0.0) return kNegInf;
    const double half_k = 0.5 * k;
    if (x == 0.0) return k == 2 ? -std::numbers::ln2 - 0.5 * lambda : kNegInf;
    if (lambda == 0.0)
        return (half_k - 1.0) * std::log(x) - 0.5 * x - half_k * std::numbers::ln2 - std::lgamma(half_k);
    return -std::numbers::ln2 - 0.5 * (x + lambda) + (0.25 * k - 0.5) * std::log(x / lambda) +
           log_bessel_i(k / 2 - 1, std::sqrt(lambda * x));
}

}  // namespace enmod
