#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "enmod/constellation.hpp"
#include "enmod/gray.hpp"

namespace enmod {

using cplx = std::complex<double>;

/// Received samples for one coherence block: n antennas by T symbols,
/// stored column by column. Coherent schemes spend the first `pilots`
/// columns on training.
class ReceivedBlock {
public:
    ReceivedBlock(int antennas, int symbols, int pilots = 0);

    int antennas() const noexcept { return antennas_; }
    int symbols() const noexcept { return symbols_; }
    int pilots() const noexcept { return pilots_; }

    std::span<cplx> column(int t);
    std::span<const cplx> column(int t) const;

private:
    int antennas_;
    int symbols_;
    int pilots_;
    std::vector<cplx> samples_;
};

/// Channel statistics the receiver believes in; may differ from the truth.
struct AssumedStats {
    double mean;              ///< mu = E[h]
    double scatter_variance;  ///< sigma_h^2
    double sigma2;            ///< noise power
};

/// (1/n) sum_i |y_i|^2.
double energy_statistic(std::span<const cplx> y);

/// Index of the region (c_{k-1}, c_k] holding stat; 0-based.
std::size_t energy_decode(const Constellation& regions, double stat);

/// Noncoherent Rician ML decision for x = sqrt(p_k):
/// argmin_k ||y - mu sqrt(p_k) 1||^2 / s_k + n log s_k, s_k = sigma^2 + sigma_h^2 p_k.
std::size_t ml_noncoherent_rician(std::span<const cplx> y, std::span<const double> levels,
                                  const AssumedStats& assumed);

/// Log density of the energy statistic ||y||^2/n for transmit power p.
double energy_statistic_log_density(double stat, int antennas, double power, const AssumedStats& assumed);

/// ML decision from the energy statistic alone (exact noncentral chi-square law).
std::size_t ml_energy_ask(double stat, int antennas, std::span<const double> levels,
                          const AssumedStats& assumed);

/// Per-antenna MMSE channel estimate from the block's pilot columns.
std::vector<cplx> pilot_mmse_estimate(const ReceivedBlock& block, int pilots, double pilot_amplitude,
                                      const AssumedStats& assumed);

/// Nearest-amplitude decision after projecting y on the channel estimate.
/// A zero estimate projects to 0. Amplitudes must be ascending.
std::size_t coherent_pam_decode(std::span<const cplx> y, std::span<const cplx> h_hat,
                                std::span<const double> amplitudes);

}  // namespace enmod
