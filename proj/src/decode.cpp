#include "enmod/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enmod/errors.hpp"
#include "enmod/special.hpp"

namespace enmod {

ReceivedBlock::ReceivedBlock(int antennas, int symbols, int pilots)
    : antennas_(antennas), symbols_(symbols), pilots_(pilots) {
    detail::require(antennas >= 1, "need at least one antenna");
    detail::require(symbols >= 1, "need at least one symbol");
    detail::require(pilots >= 0 && (pilots == 0 || pilots < symbols), "pilot count must be below block length");
    samples_.assign(static_cast<std::size_t>(antennas) * static_cast<std::size_t>(symbols), cplx{});
}

std::span<cplx> ReceivedBlock::column(int t) {
    detail::require(t >= 0 && t < symbols_, "symbol index out of range");
    return {samples_.data() + static_cast<std::size_t>(t) * antennas_, static_cast<std::size_t>(antennas_)};
}

std::span<const cplx> ReceivedBlock::column(int t) const {
    detail::require(t >= 0 && t < symbols_, "symbol index out of range");
    return {samples_.data() + static_cast<std::size_t>(t) * antennas_, static_cast<std::size_t>(antennas_)};
}

double energy_statistic(std::span<const cplx> y) {
    detail::require(!y.empty(), "empty received vector");
    double sum = 0.0;
    for (const auto& v : y) sum += std::norm(v);
    return sum / static_cast<double>(y.size());
}

std::size_t energy_decode(const Constellation& regions, double stat) {
    detail::require(regions.has_regions(), "constellation has no decoding regions");
    const auto b = regions.boundaries();
    return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), stat) - b.begin());
}

std::size_t ml_noncoherent_rician(std::span<const cplx> y, std::span<const double> levels,
                                  const AssumedStats& assumed) {
    detail::require(!levels.empty(), "no levels to decide between");
    const double n = static_cast<double>(y.size());
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double shift = assumed.mean * std::sqrt(levels[k]);
        const double s = assumed.sigma2 + assumed.scatter_variance * levels[k];
        double dist = 0.0;
        for (const auto& v : y) dist += std::norm(v - shift);
        const double cost = dist / s + n * std::log(s);
        if (cost < best_cost) {
            best_cost = cost;
            best = k;
        }
    }
    return best;
}

double energy_statistic_log_density(double stat, int antennas, double power, const AssumedStats& assumed) {
    detail::require(antennas >= 1, "need at least one antenna");
    const double n = static_cast<double>(antennas);
    const double s2 = assumed.scatter_variance * power + assumed.sigma2;
    // 2 ||y||^2 / s2 is chi-square with 2n degrees of freedom.
    const double scale = 2.0 * n / s2;
    const double lambda = scale * assumed.mean * assumed.mean * power;
    return log_noncentral_chi2_pdf(scale * stat, 2 * antennas, lambda) + std::log(scale);
}

std::size_t ml_energy_ask(double stat, int antennas, std::span<const double> levels,
                          const AssumedStats& assumed) {
    detail::require(!levels.empty(), "no levels to decide between");
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double ll = energy_statistic_log_density(stat, antennas, levels[k], assumed);
        if (ll > best_ll) {
            best_ll = ll;
            best = k;
        }
    }
    return best;
}

std::vector<cplx> pilot_mmse_estimate(const ReceivedBlock& block, int pilots, double pilot_amplitude,
                                      const AssumedStats& assumed) {
    detail::require(pilots >= 1, "MMSE estimation needs at least one pilot");
    detail::require(pilots <= block.symbols(), "more pilots than block columns");
    const int n = block.antennas();
    std::vector<cplx> avg(static_cast<std::size_t>(n), cplx{});
    for (int t = 0; t < pilots; ++t) {
        const auto col = block.column(t);
        for (int i = 0; i < n; ++i) avg[i] += col[i];
    }
    const double tl = static_cast<double>(pilots);
    const double gain = assumed.scatter_variance * pilot_amplitude /
                        (assumed.scatter_variance * pilot_amplitude * pilot_amplitude + assumed.sigma2 / tl);
    for (auto& v : avg) v = assumed.mean + gain * (v / tl - assumed.mean * pilot_amplitude);
    return avg;
}

std::size_t coherent_pam_decode(std::span<const cplx> y, std::span<const cplx> h_hat,
                                std::span<const double> amplitudes) {
    detail::require(y.size() == h_hat.size(), "estimate and received vector differ in length");
    detail::require(!amplitudes.empty(), "no amplitudes to decide between");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += std::real(std::conj(h_hat[i]) * y[i]);
        den += std::norm(h_hat[i]);
    }
    const double z = den > 0.0 ? num / den : 0.0;
    std::size_t best = 0;
    double best_dist = std::abs(z - amplitudes[0]);
    for (std::size_t k = 1; k < amplitudes.size(); ++k) {
        const double dist = std::abs(z - amplitudes[k]);
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    return best;
}

std::uint32_t gray_map(std::uint32_t index, int bits) {
    detail::require(bits >= 0 && bits < 32, "label width must be in [0, 32)");
    detail::require(index < (std::uint32_t{1} << bits) || (bits == 0 && index == 0), "index out of range");
    return index ^ (index >> 1);
}

std::uint32_t gray_unmap(std::uint32_t code, int bits) {
    detail::require(bits >= 0 && bits < 32, "label width must be in [0, 32)");
    detail::require(code < (std::uint32_t{1} << bits) || (bits == 0 && code == 0), "code out of range");
    std::uint32_t index = code;
    for (std::uint32_t shift = code >> 1; shift != 0; shift >>= 1) index ^= shift;
    return index;
}

std::string gray_bits(std::uint32_t index, int bits) {
    const std::uint32_t code = gray_map(index, bits);
    std::string out(static_cast<std::size_t>(bits), '0');
    for (int b = 0; b < bits; ++b)
        if (code & (std::uint32_t{1} << (bits - 1 - b))) out[static_cast<std::size_t>(b)] = '1';
    return out;
}

}  // namespace enmod
