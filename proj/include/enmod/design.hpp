#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enmod/channel.hpp"
#include "enmod/constellation.hpp"

namespace enmod {

struct DesignConfig {
    int levels = 4;
    double power_budget = 1.0;
    /// Bisection stops once |t_u - t_l| < tolerance and |S_t - budget| < tolerance.
    double tolerance = 1e-6;
    int max_iterations = 400;

    void validate() const;
};

/// Feasible moment region: alpha1 in [alpha_min, alpha_max] and noise
/// amplitude sigma in [sigma_min, sigma_max].
struct UncertaintyBox {
    double alpha_min;
    double alpha_max;
    double sigma_min;
    double sigma_max;

    void validate() const;
    static UncertaintyBox point(double alpha1, double sigma2);
    /// Enclosing box of the four (K +- a, SNR +- a) corners around a nominal
    /// Rician channel.
    static UncertaintyBox around_rician(double k_db, double snr_db, double half_width_db);
};

struct DesignDiagnostics {
    /// Per interior boundary: exponent on the right of the lower level and on
    /// the left of the upper level, in the units of the design's rate model.
    std::vector<double> right_exponents;
    std::vector<double> left_exponents;
    double mean_power = 0.0;
    int iterations = 0;
};

struct DesignOutcome {
    bool feasible = false;
    Constellation constellation;
    double t_star = 0.0;
    DesignDiagnostics diagnostics;
};

/// Rate functions as seen by the sequential construction. The exact model
/// uses the channel's MGF; the quadratic model uses d^2 / (2 E[U^2]).
class RateModel {
public:
    virtual ~RateModel() = default;
    virtual double sigma2() const = 0;
    /// Smallest d with I_R(d; p) = t.
    virtual double right_deviation(double power, double t) const = 0;
    virtual double right_exponent(double power, double d) const = 0;
    virtual double left_exponent(double power, double d) const = 0;
};

class ExactRateModel final : public RateModel {
public:
    ExactRateModel(ChannelSpec channel, double sigma2);
    double sigma2() const override { return sigma2_; }
    double right_deviation(double power, double t) const override;
    double right_exponent(double power, double d) const override;
    double left_exponent(double power, double d) const override;

private:
    ChannelSpec channel_;
    double sigma2_;
};

class QuadraticRateModel final : public RateModel {
public:
    QuadraticRateModel(double alpha1, double sigma2);
    double sigma2() const override { return sigma2_; }
    double right_deviation(double power, double t) const override;
    double right_exponent(double power, double d) const override;
    double left_exponent(double power, double d) const override;

private:
    double alpha1_;
    double sigma2_;
};

/// Sequential construction at a fixed target exponent t: p_1 = 0, each
/// boundary as close as the right exponent allows, each next level as low as
/// the left exponent allows. Returns nullopt when no next level exists.
struct Construction {
    std::vector<double> levels;
    std::vector<double> boundaries;
    std::vector<double> right_exponents;
    std::vector<double> left_exponents;
    double mean_power() const;
};
std::optional<Construction> construct_exact(const RateModel& model, int levels, double t);
std::optional<Construction> construct_moments(double alpha1, double sigma2, int levels, double t);
std::optional<Construction> construct_robust(const UncertaintyBox& box, int levels, double t);

/// Maximum error-exponent constellation for a known fading law.
DesignOutcome design_exact(const ChannelSpec& channel, double sigma2, const DesignConfig& cfg);
/// Same search driven by an arbitrary rate model.
DesignOutcome design_with_model(const RateModel& model, const DesignConfig& cfg);
/// Design from alpha1 and sigma2 under the quadratic rate approximation.
DesignOutcome design_moments(double alpha1, double sigma2, const DesignConfig& cfg);
/// Worst-case design over the uncertainty box; feasible = false when no
/// positive exponent meets the power budget.
DesignOutcome design_robust(const UncertaintyBox& box, const DesignConfig& cfg);

/// Levels 2(k-1)/(L-1) with boundaries midway between consecutive r(p_k).
Constellation min_distance_constellation(int levels, double sigma2);
/// Equally spaced amplitudes with unit mean power (levels only).
Constellation ask_constellation(int levels);

struct PamConstellation {
    std::vector<double> amplitudes;       ///< ascending
    std::vector<std::uint32_t> labels;    ///< BRGC label of each amplitude
    int bits = 0;
};
/// Symmetric unit-power PAM with Gray labels in amplitude order. L must be a
/// power of two.
PamConstellation pam_constellation(int levels);

}  // namespace enmod
