#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "enmod/channel.hpp"
#include "enmod/errors.hpp"

using namespace enmod;

namespace {

struct Moments {
    double mean_re = 0, mean_im = 0, second = 0, fourth = 0;
    double var_second = 0;
};

Moments sample_moments(const ChannelSpec& ch, std::size_t count, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    const auto h = sample_channel(ch, count, rng);
    Moments m;
    double sq2 = 0;
    for (const auto& v : h) {
        const double a = std::norm(v);
        m.mean_re += v.real();
        m.mean_im += v.imag();
        m.second += a;
        m.fourth += a * a;
        sq2 += a * a;
    }
    const double n = static_cast<double>(count);
    m.mean_re /= n;
    m.mean_im /= n;
    m.second /= n;
    m.fourth /= n;
    m.var_second = sq2 / n - m.second * m.second;
    return m;
}

// E[exp(theta U)] for a Nakagami amplitude by integrating the conditional
// complex-Gaussian MGF against the amplitude density.
double nakagami_log_mgf_quadrature(double m, double omega, double sigma2, double p, double theta) {
    const double a = 1.0 - theta * sigma2;
    auto integrand = [&](double r) {
        const double log_pdf = std::log(2.0) + m * std::log(m / omega) + (2.0 * m - 1.0) * std::log(r) -
                               std::lgamma(m) - m * r * r / omega;
        return std::exp(log_pdf + theta * r * r * p / a);
    };
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
    return std::log(integral) - std::log(a) - theta * (omega * p + sigma2);
}

}  // namespace

TEST_CASE("snr conversions") {
    CHECK(sigma2_from_snr(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sigma2_from_snr(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(sigma2_from_snr(-10.0) == doctest::Approx(10.0).epsilon(1e-15));
    for (double g : {-7.5, 0.0, 3.0, 21.0}) CHECK(snr_from_sigma2(sigma2_from_snr(g)) == doctest::Approx(g).epsilon(1e-12));
    CHECK_THROWS_AS(sigma2_from_snr(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(sigma2_from_snr(std::nan("")), std::invalid_argument);
    const auto plan = NoisePlan::from_snr_db(10.0);
    CHECK(plan.sigma2 == doctest::Approx(0.1));
}

TEST_CASE("alpha1 closed forms") {
    CHECK(ChannelSpec::rayleigh().alpha1() == doctest::Approx(1.0));
    CHECK(ChannelSpec::rician_linear(1.0).alpha1() == doctest::Approx(0.75));
    CHECK(ChannelSpec::rician_db(0.0).alpha1() == doctest::Approx(0.75));
    CHECK(ChannelSpec::nakagami(1.0, 1.0).alpha1() == doctest::Approx(1.0));
    CHECK(ChannelSpec::nakagami(2.0, 1.0).alpha1() == doctest::Approx(0.5));
    CHECK(ChannelSpec::moments_only(0.3).alpha1() == doctest::Approx(0.3));
    for (double k : {0.0, 0.5, 3.0, 100.0}) {
        const double a = ChannelSpec::rician_linear(k).alpha1();
        CHECK(a > 0.0);
        CHECK(a <= 1.0);
    }
    CHECK_THROWS_AS(ChannelSpec::moments_only(-0.1), std::invalid_argument);
}

TEST_CASE("sampled moments match analytic values within 4 standard errors") {
    const std::size_t count = 400000;
    const std::vector<ChannelSpec> channels{ChannelSpec::rayleigh(), ChannelSpec::rician_db(0.0),
                                            ChannelSpec::rician_db(6.0), ChannelSpec::nakagami(1.0),
                                            ChannelSpec::nakagami(2.7)};
    std::uint64_t seed = 11;
    for (const auto& ch : channels) {
        CAPTURE(ch.describe());
        const Moments m = sample_moments(ch, count, seed++);
        const double n = static_cast<double>(count);
        const double se_mean = std::sqrt(ch.scatter_variance() / n) + 1e-12;
        CHECK(std::abs(m.mean_re - ch.mean()) < 4.0 * se_mean);
        CHECK(std::abs(m.mean_im) < 4.0 * se_mean);
        const double se_second = std::sqrt(m.var_second / n);
        CHECK(std::abs(m.second - 1.0) < 4.0 * se_second);
        // Var|h|^2 = alpha1 for unit-power channels.
        const double a_hat = m.var_second;
        CHECK(std::abs(a_hat - ch.alpha1()) < 0.02 * std::max(ch.alpha1(), 0.1));
    }
}

TEST_CASE("channel sampling examples") {
    CounterRng rng(3, 0);
    for (const auto& h : sample_channel(ChannelSpec::rician_db(std::numeric_limits<double>::infinity()), 100, rng)) {
        CHECK(h.real() == 1.0);
        CHECK(h.imag() == 0.0);
    }
    CounterRng big(4, 0);
    const auto h = sample_channel(ChannelSpec::rayleigh(), 1000000, big);
    double mean = 0;
    for (const auto& v : h) mean += std::norm(v);
    CHECK(std::abs(mean / 1e6 - 1.0) < 5e-3);

    SUBCASE("nakagami m=1 power is exponential (KS at 1%)") {
        CounterRng r(5, 0);
        auto s = sample_channel(ChannelSpec::nakagami(1.0), 20000, r);
        std::vector<double> x;
        for (const auto& v : s) {
            CHECK(v.imag() == 0.0);
            CHECK(v.real() >= 0.0);
            x.push_back(std::norm(v));
        }
        std::sort(x.begin(), x.end());
        double d = 0;
        const double n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double f = 1.0 - std::exp(-x[i]);
            d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
        }
        CHECK(d < 1.628 / std::sqrt(n));
    }

    CounterRng r(6, 0);
    CHECK_THROWS_AS(sample_channel(ChannelSpec::moments_only(1.0), 4, r), NotSamplable);
}

TEST_CASE("energy variance") {
    CHECK(u_second_moment(ChannelSpec::rayleigh(), 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(u_second_moment(ChannelSpec::rayleigh(), 1.0, 1.0) == doctest::Approx(4.0));
    CHECK(u_second_moment(ChannelSpec::rician_linear(1.0), 0.1, 2.0) == doctest::Approx(3.41));
    CHECK_THROWS_AS(u_second_moment(1.0, 0.1, -1.0), std::invalid_argument);

    // Monte Carlo variance of |h sqrt(p) + v|^2.
    CounterRng rng(8, 0);
    const double p = 1.0, s2 = 1.0;
    double sum = 0, sum2 = 0;
    const int count = 400000;
    for (int i = 0; i < count; ++i) {
        const double e = std::norm(sample_coefficient(ChannelSpec::rayleigh(), rng) * std::sqrt(p) + rng.complex_normal(s2));
        sum += e;
        sum2 += e * e;
    }
    const double var = sum2 / count - (sum / count) * (sum / count);
    CHECK(var == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("log MGF") {
    const std::vector<ChannelSpec> channels{ChannelSpec::rayleigh(), ChannelSpec::rician_db(0.0),
                                            ChannelSpec::rician_db(6.0), ChannelSpec::nakagami(1.5)};
    for (const auto& ch : channels)
        for (double p : {0.0, 0.5, 2.0})
            for (double s2 : {1.0, 0.1}) CHECK(log_mgf_energy(ch, s2, p, 0.0) == 0.0);

    CHECK(log_mgf_energy(ChannelSpec::rayleigh(), 1.0, 0.0, 0.5) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));

    SUBCASE("derivatives at zero") {
        const double h = 1e-4;
        for (const auto& ch : channels) {
            for (double p : {0.0, 0.5, 2.0}) {
                const double s2 = 0.3;
                const double fp = log_mgf_energy(ch, s2, p, h);
                const double fm = log_mgf_energy(ch, s2, p, -h);
                CHECK(std::abs((fp - fm) / (2 * h)) < 1e-6);
                const double second = (fp + fm) / (h * h);
                CHECK(second == doctest::Approx(u_second_moment(ch, s2, p)).epsilon(1e-4));
            }
        }
    }

    SUBCASE("rician closed form against Monte Carlo") {
        for (double k_db : {-std::numeric_limits<double>::infinity(), 0.0}) {
            const auto ch = ChannelSpec::rician_db(k_db);
            for (double p : {0.0, 0.5, 2.0}) {
                for (double g : {0.0, 10.0}) {
                    const double s2 = sigma2_from_snr(g);
                    const double tmax = mgf_theta_max(ch, s2, p);
                    for (double theta : {-2.0, -0.5, 0.3 * tmax}) {
                        CounterRng rng(static_cast<std::uint64_t>(1000 * p + g + 17), static_cast<std::uint64_t>(theta * 100 + 500));
                        const int count = 200000;
                        double sum = 0, sum2 = 0;
                        const double r = p + s2;
                        for (int i = 0; i < count; ++i) {
                            const double e = std::norm(sample_coefficient(ch, rng) * std::sqrt(p) + rng.complex_normal(s2));
                            const double w = std::exp(theta * (e - r));
                            sum += w;
                            sum2 += w * w;
                        }
                        const double mean = sum / count;
                        const double se = std::sqrt((sum2 / count - mean * mean) / count);
                        const double exact = std::exp(log_mgf_energy(ch, s2, p, theta));
                        CAPTURE(p);
                        CAPTURE(g);
                        CAPTURE(theta);
                        CHECK(std::abs(mean - exact) < 3.0 * se + 1e-12);
                    }
                }
            }
        }
    }

    SUBCASE("rician domain boundary") {
        const auto ch = ChannelSpec::rician_db(0.0);
        const double p = 2.0, s2 = 0.1;
        const double boundary = 1.0 / (ch.scatter_variance() * p + s2);
        CHECK(mgf_theta_max(ch, s2, p) == doctest::Approx(boundary));
        CHECK_NOTHROW(log_mgf_energy(ch, s2, p, std::nextafter(boundary, 0.0)));
        CHECK_THROWS_AS(log_mgf_energy(ch, s2, p, boundary), DivergentMgf);
        try {
            log_mgf_energy(ch, s2, p, 2 * boundary);
        } catch (const DivergentMgf& e) {
            CHECK(e.theta_max() == doctest::Approx(boundary));
        }
    }

    SUBCASE("nakagami closed form against quadrature") {
        for (double m : {0.7, 1.0, 2.5, 6.0}) {
            for (double p : {0.5, 2.0}) {
                const double s2 = 0.2;
                const auto ch = ChannelSpec::nakagami(m);
                const double tmax = mgf_theta_max(ch, s2, p);
                for (double theta : {-3.0, -0.4, 0.2 * tmax, 0.7 * tmax}) {
                    const double q = nakagami_log_mgf_quadrature(m, 1.0, s2, p, theta);
                    CHECK(log_mgf_energy(ch, s2, p, theta) == doctest::Approx(q).epsilon(1e-9));
                }
                CHECK_THROWS_AS(log_mgf_energy(ch, s2, p, tmax), DivergentMgf);
            }
        }
    }

    CHECK_THROWS_AS(log_mgf_energy(ChannelSpec::moments_only(1.0), 1.0, 1.0, 0.1), NotSamplable);
}

TEST_CASE("nakagami m from K") {
    const double k = std::numbers::pi / (4.0 - std::numbers::pi);
    CHECK(nakagami_m_from_k(10.0 * std::log10(k)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(nakagami_m_from_k(30.0) > nakagami_m_from_k(10.0));
    for (double k_db : {-5.0, 0.0, 5.0, 12.0}) {
        const double m = nakagami_m_from_k(k_db);
        const double kl = db_to_linear(k_db);
        const double lhs = std::exp(std::lgamma(m + 0.5) - std::lgamma(m)) / std::sqrt(m);
        CHECK(std::abs(lhs - std::sqrt(kl / (kl + 1.0))) < 1e-9);
    }
    CHECK_THROWS_AS(nakagami_m_from_k(-std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(nakagami_m_from_k(std::nan("")), std::invalid_argument);
}
