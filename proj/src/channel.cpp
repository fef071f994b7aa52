#include "enmod/channel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "enmod/errors.hpp"

namespace enmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gamma(m + 1/2) / (Gamma(m) sqrt(m)), the mean of a unit-power Nakagami amplitude.
double nakagami_mean_ratio(double m) {
    return std::exp(std::lgamma(m + 0.5) - std::lgamma(m) - 0.5 * std::log(m));
}

}  // namespace

double db_to_linear(double db) {
    if (std::isnan(db)) throw InvalidArgument("decibel value is NaN");
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) {
    detail::require(linear >= 0.0, "linear value must be nonnegative");
    return 10.0 * std::log10(linear);
}

double sigma2_from_snr(double snr_db) {
    detail::require(std::isfinite(snr_db), "SNR must be finite");
    return std::pow(10.0, -snr_db / 10.0);
}

double snr_from_sigma2(double sigma2) {
    detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "noise power must be positive and finite");
    return -10.0 * std::log10(sigma2);
}

NoisePlan NoisePlan::from_snr_db(double snr_db) { return {snr_db, sigma2_from_snr(snr_db)}; }

NoisePlan NoisePlan::from_sigma2(double sigma2) { return {snr_from_sigma2(sigma2), sigma2}; }

ChannelSpec ChannelSpec::rician_db(double k_db) {
    if (std::isnan(k_db)) throw InvalidArgument("K-factor is NaN");
    return rician_linear(db_to_linear(k_db));
}

ChannelSpec ChannelSpec::rician_linear(double k) {
    detail::require(k >= 0.0, "K-factor must be nonnegative");
    const double a1 = std::isinf(k) ? 0.0 : (1.0 + 2.0 * k) / ((1.0 + k) * (1.0 + k));
    return ChannelSpec(Kind::Rician, k, 1.0, a1);
}

ChannelSpec ChannelSpec::nakagami(double m, double omega) {
    detail::require(std::isfinite(m) && m > 0.0, "Nakagami shape m must be positive");
    detail::require(std::isfinite(omega) && omega > 0.0, "Nakagami spread Omega must be positive");
    return ChannelSpec(Kind::NakagamiReal, m, omega, omega * omega * (1.0 + 1.0 / m) - 1.0);
}

ChannelSpec ChannelSpec::moments_only(double a1) {
    detail::require(std::isfinite(a1) && a1 >= 0.0, "alpha1 must be finite and nonnegative");
    return ChannelSpec(Kind::MomentsOnly, 0.0, 0.0, a1);
}

void ChannelSpec::require_distribution() const {
    if (kind_ == Kind::MomentsOnly) throw NotSamplable();
}

double ChannelSpec::k_linear() const {
    if (kind_ != Kind::Rician) throw InvalidArgument("not a Rician channel");
    return a_;
}

double ChannelSpec::nakagami_m() const {
    if (kind_ != Kind::NakagamiReal) throw InvalidArgument("not a Nakagami channel");
    return a_;
}

double ChannelSpec::nakagami_omega() const {
    if (kind_ != Kind::NakagamiReal) throw InvalidArgument("not a Nakagami channel");
    return b_;
}

double ChannelSpec::mean() const {
    require_distribution();
    if (kind_ == Kind::Rician) return std::isinf(a_) ? 1.0 : std::sqrt(a_ / (a_ + 1.0));
    return nakagami_mean_ratio(a_) * std::sqrt(b_);
}

double ChannelSpec::scatter_variance() const {
    require_distribution();
    if (kind_ == Kind::Rician) return std::isinf(a_) ? 0.0 : 1.0 / (a_ + 1.0);
    const double mu = mean();
    return b_ - mu * mu;
}

double ChannelSpec::second_moment() const {
    require_distribution();
    return kind_ == Kind::Rician ? 1.0 : b_;
}

std::string ChannelSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Rician:
            if (a_ == 0.0)
                os << "rayleigh";
            else
                os << "rician(K=" << linear_to_db(a_) << " dB)";
            break;
        case Kind::NakagamiReal: os << "nakagami(m=" << a_ << ", omega=" << b_ << ")"; break;
        case Kind::MomentsOnly: os << "moments(alpha1=" << alpha1_ << ")"; break;
    }
    return os.str();
}

double alpha1(const ChannelSpec& channel) { return channel.alpha1(); }

double u_second_moment(double a1, double sigma2, double power) {
    detail::require(power >= 0.0, "power level must be nonnegative");
    return a1 * power * power + 2.0 * sigma2 * power + sigma2 * sigma2;
}

double u_second_moment(const ChannelSpec& channel, double sigma2, double power) {
    return u_second_moment(channel.alpha1(), sigma2, power);
}

std::complex<double> sample_coefficient(const ChannelSpec& channel, CounterRng& rng) {
    switch (channel.kind()) {
        case ChannelSpec::Kind::Rician: {
            const double mu = channel.mean();
            const double var = channel.scatter_variance();
            if (var == 0.0) return {mu, 0.0};
            return std::complex<double>(mu, 0.0) + rng.complex_normal(var);
        }
        case ChannelSpec::Kind::NakagamiReal: {
            const double m = channel.nakagami_m();
            const double omega = channel.nakagami_omega();
            return {std::sqrt(rng.gamma(m, omega / m)), 0.0};
        }
        case ChannelSpec::Kind::MomentsOnly: break;
    }
    throw NotSamplable();
}

std::vector<std::complex<double>> sample_channel(const ChannelSpec& channel, std::size_t count,
                                                 CounterRng& rng) {
    if (!channel.samplable()) throw NotSamplable();
    std::vector<std::complex<double>> out(count);
    for (auto& h : out) h = sample_coefficient(channel, rng);
    return out;
}

double mgf_theta_max(const ChannelSpec& channel, double sigma2, double power) {
    detail::require(sigma2 > 0.0, "noise power must be positive");
    detail::require(power >= 0.0, "power level must be nonnegative");
    switch (channel.kind()) {
        case ChannelSpec::Kind::Rician:
            return 1.0 / (channel.scatter_variance() * power + sigma2);
        case ChannelSpec::Kind::NakagamiReal:
            return 1.0 / (sigma2 + power * channel.nakagami_omega() / channel.nakagami_m());
        case ChannelSpec::Kind::MomentsOnly: break;
    }
    throw NotSamplable();
}

double log_mgf_energy(const ChannelSpec& channel, double sigma2, double power, double theta) {
    const double theta_max = mgf_theta_max(channel, sigma2, power);
    if (!(theta < theta_max)) throw DivergentMgf(theta_max);
    if (theta == 0.0) return 0.0;

    const double r = channel.second_moment() * power + sigma2;
    if (channel.kind() == ChannelSpec::Kind::Rician) {
        // y ~ CN(mu sqrt(p), s2): noncentral exponential MGF.
        const double mu = channel.mean();
        const double s2 = channel.scatter_variance() * power + sigma2;
        const double q = 1.0 - theta * s2;
        if (!(q > 0.0)) throw DivergentMgf(theta_max);
        return -theta * r + theta * mu * mu * power / q - std::log1p(-theta * s2);
    }

    // Nakagami: conditioned on the amplitude a, |y|^2 has MGF
    // exp(theta a^2 p / q) / q with q = 1 - theta sigma^2, and a^2 ~ Gamma(m, Omega/m).
    const double m = channel.nakagami_m();
    const double omega = channel.nakagami_omega();
    const double q = 1.0 - theta * sigma2;
    const double beta = theta * power / q;
    const double z = beta * omega / m;
    if (!(q > 0.0) || !(z < 1.0)) throw DivergentMgf(theta_max);
    return -theta * r - std::log(q) - m * std::log1p(-z);
}

double nakagami_m_from_k(double k_db) {
    detail::require(std::isfinite(k_db), "K-factor must be finite");
    const double k = db_to_linear(k_db);
    if (!(k > 0.0)) throw InvalidArgument("no matching m: K-factor must be positive");
    const double target = std::sqrt(k / (k + 1.0));
    if (!(target < 1.0)) throw InvalidArgument("no matching m: K-factor too large");

    auto residual = [target](double m) { return nakagami_mean_ratio(m) - target; };
    double lo = 0.5;
    while (residual(lo) > 0.0) lo *= 0.5;
    double hi = 1.0;
    while (residual(hi) < 0.0) hi *= 2.0;

    boost::math::tools::eps_tolerance<double> tol(40);
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, tol, max_iter);
    return 0.5 * (a + b);
}

}  // namespace enmod
