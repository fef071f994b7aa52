#pragma once

#include <vector>

#include "enmod/channel.hpp"
#include "enmod/constellation.hpp"

namespace enmod {

enum class Side { Left, Right };

/// Large-deviation rate functions of the per-antenna energy deviation U for
/// one transmit power level.
///
///   I_R(d) = sup_{theta >= 0} theta d - log E[exp(theta U)]
///   I_L(d) = sup_{theta >= 0} theta d - log E[exp(-theta U)]
///
/// Exponents are extended reals: I_L(d) = +inf once d reaches r(p), since the
/// energy statistic cannot fall below zero. Immutable; safe to share.
class RateOracle {
public:
    RateOracle(ChannelSpec channel, double sigma2, double power);

    const ChannelSpec& channel() const noexcept { return channel_; }
    double sigma2() const noexcept { return sigma2_; }
    double power() const noexcept { return power_; }
    double theta_max() const noexcept { return theta_max_; }
    /// r(p) = E|h sqrt(p) + v|^2.
    double mean_energy() const noexcept { return mean_energy_; }
    /// E[U^2].
    double energy_variance() const noexcept { return energy_variance_; }

    double log_mgf(double theta) const;

    double right(double d) const;
    double left(double d) const;
    double rate(Side side, double d) const { return side == Side::Right ? right(d) : left(d); }

    /// Smallest d > 0 with I(d) = t.
    double inverse(Side side, double t) const;

private:
    double supremum(double d, double sign, double upper) const;

    ChannelSpec channel_;
    double sigma2_;
    double power_;
    double theta_max_;
    double mean_energy_;
    double energy_variance_;
};

inline double rate_right(const RateOracle& oracle, double d) { return oracle.right(d); }
inline double rate_left(const RateOracle& oracle, double d) { return oracle.left(d); }
inline double inverse_rate(const RateOracle& oracle, Side side, double t) {
    return oracle.inverse(side, t);
}

/// Quadratic small-deviation approximation d^2 / (2 s_p).
double approx_rate(double s_p, double d);

/// d_R in (0, gap) at which I_R of the lower level equals I_L of the upper
/// level evaluated at gap - d_R.
double equalize_boundary(const RateOracle& lower, const RateOracle& upper, double gap);

/// Exponents on both sides of each interior boundary k (0-based, k < L-1):
/// right = I_{R,k}(d_{R,k}), left = I_{L,k+1}(d_{L,k+1}). Deviations are
/// measured from the mean energy under the evaluated channel; a region that
/// does not contain its own mean contributes exponent 0.
struct BoundaryExponents {
    double right;
    double left;
};
std::vector<BoundaryExponents> boundary_exponents(const Constellation& constellation,
                                                  const ChannelSpec& channel, double sigma2);

/// (1/L) sum_k exp(-n I_{R,k}) + exp(-n I_{L,k}), outer sides contributing 0.
double chernoff_ser_bound(const Constellation& constellation, const ChannelSpec& channel,
                          double sigma2, int antennas);

/// min_k min(I_{L,k}, I_{R,k}); +inf for a single-level constellation.
double error_exponent(const Constellation& constellation, const ChannelSpec& channel, double sigma2);

/// Same exponent under the quadratic approximation with E[U^2] from alpha1.
double approx_error_exponent(const Constellation& constellation, double alpha1, double sigma2);

/// Regions for fixed levels with every boundary placed by equalize_boundary.
Constellation equalize_regions(std::vector<double> levels, const ChannelSpec& channel,
                               double sigma2);

}  // namespace enmod
