#pragma once

#include <complex>
#include <string>
#include <vector>

#include "enmod/rng.hpp"

namespace enmod {

/// Linear value of a decibel quantity (-inf dB maps to 0, +inf dB to +inf).
double db_to_linear(double db);
double linear_to_db(double linear);

/// Receiver noise power for a per-antenna SNR in dB (unit channel gain).
double sigma2_from_snr(double snr_db);
double snr_from_sigma2(double sigma2);

/// Noise level of the receiver, kept in both representations.
struct NoisePlan {
    double snr_db;
    double sigma2;

    static NoisePlan from_snr_db(double snr_db);
    static NoisePlan from_sigma2(double sigma2);
};

/// Fading law of a single antenna coefficient h.
///
/// Rician channels are complex Gaussian with mean sqrt(K/(K+1)) and scatter
/// variance 1/(K+1); K = 0 is Rayleigh and K = inf a deterministic unit
/// line-of-sight. Nakagami channels are nonnegative real amplitudes.
/// Moments-only channels carry the fourth-moment coefficient alone and are
/// rejected by every operation that needs the distribution.
class ChannelSpec {
public:
    enum class Kind { Rician, NakagamiReal, MomentsOnly };

    static ChannelSpec rician_db(double k_db);
    static ChannelSpec rician_linear(double k_linear);
    static ChannelSpec rayleigh() { return rician_linear(0.0); }
    static ChannelSpec nakagami(double m, double omega = 1.0);
    static ChannelSpec moments_only(double alpha1);

    Kind kind() const noexcept { return kind_; }
    bool samplable() const noexcept { return kind_ != Kind::MomentsOnly; }

    double k_linear() const;
    double nakagami_m() const;
    double nakagami_omega() const;

    /// E[h]; real and nonnegative for every supported law.
    double mean() const;
    /// E|h - E[h]|^2.
    double scatter_variance() const;
    /// E|h|^2.
    double second_moment() const;
    /// Fourth-moment coefficient: E[U^2] = alpha1 p^2 + 2 sigma^2 p + sigma^4.
    double alpha1() const noexcept { return alpha1_; }

    std::string describe() const;

private:
    ChannelSpec(Kind kind, double a, double b, double alpha1)
        : kind_(kind), a_(a), b_(b), alpha1_(alpha1) {}

    void require_distribution() const;

    Kind kind_;
    double a_;  // K (Rician) or m (Nakagami)
    double b_;  // Omega (Nakagami)
    double alpha1_;
};

double alpha1(const ChannelSpec& channel);

/// E[U^2] for transmit power p at noise power sigma2.
double u_second_moment(const ChannelSpec& channel, double sigma2, double power);
/// Same quantity from the fourth-moment coefficient alone.
double u_second_moment(double alpha1, double sigma2, double power);

/// I.i.d. channel draws. Throws NotSamplable for moments-only channels.
std::vector<std::complex<double>> sample_channel(const ChannelSpec& channel, std::size_t count,
                                                 CounterRng& rng);
std::complex<double> sample_coefficient(const ChannelSpec& channel, CounterRng& rng);

/// Right end of the domain of theta -> E[exp(theta U)].
double mgf_theta_max(const ChannelSpec& channel, double sigma2, double power);

/// log E[exp(theta U)] with U = |h sqrt(p) + v|^2 - E|h sqrt(p) + v|^2.
///
/// Throws DivergentMgf when theta >= mgf_theta_max(...).
double log_mgf_energy(const ChannelSpec& channel, double sigma2, double power, double theta);

/// Nakagami shape m (Omega = 1) whose mean amplitude matches a Rician
/// channel with the given K-factor: Gamma(m+1/2)/(Gamma(m) sqrt(m)) = sqrt(K/(K+1)).
double nakagami_m_from_k(double k_db);

}  // namespace enmod
