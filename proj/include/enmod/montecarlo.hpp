#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "enmod/channel.hpp"
#include "enmod/constellation.hpp"
#include "enmod/decode.hpp"
#include "enmod/design.hpp"

namespace enmod {

/// Energy transmitter decoded by statistic regions.
struct EnergyRegionsScheme {
    Constellation regions;
};

/// Energy transmitter decoded by the noncoherent Rician ML rule.
struct NoncoherentMlScheme {
    std::vector<double> levels;
    AssumedStats assumed;
};

/// Energy transmitter decoded by the exact ML rule on the energy statistic.
struct AskEnergyMlScheme {
    std::vector<double> levels;
    AssumedStats assumed;
};

/// Block-fading PAM: `pilots` training columns of amplitude `pilot_amplitude`
/// then coherent decoding on the remaining columns of each `coherence`-long
/// block. With zero pilots the receiver uses the prior mean as its estimate.
struct PilotPamScheme {
    PamConstellation pam;
    int coherence = 1;
    int pilots = 0;
    AssumedStats assumed{};
    double pilot_amplitude = 1.0;
};

using Scheme = std::variant<EnergyRegionsScheme, NoncoherentMlScheme, AskEnergyMlScheme, PilotPamScheme>;

struct SimScenario {
    Scheme scheme;
    ChannelSpec true_channel = ChannelSpec::rayleigh();
    double true_sigma2 = 0.1;
    int antennas = 100;
    std::uint64_t symbols = 100000;
    std::uint64_t seed = 1;
    int shards = 1;

    void validate() const;
    std::size_t constellation_size() const;
    int bits_per_symbol() const;
    /// Information bits per channel use after pilot overhead.
    double effective_rate() const;
};

struct Interval {
    double low;
    double high;
};

/// Wilson score interval for a binomial proportion (95% by default).
Interval wilson_interval(std::uint64_t events, std::uint64_t trials, double z = 1.959963984540054);

struct SimReport {
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ser = 0.0;
    double ber = 0.0;
    Interval ser_ci{0.0, 1.0};
    Interval ber_ci{0.0, 1.0};
    std::uint64_t seed = 0;
    int shards = 1;
    double wall_seconds = 0.0;
    std::vector<std::uint64_t> sent_per_symbol;
    std::vector<std::uint64_t> errors_per_symbol;

    /// Binomial standard error of the SER estimate.
    double ser_standard_error() const;
};

/// Monte Carlo SER/BER. Draw u (a symbol, or a coherence block for PAM)
/// uses the stream (seed, u), so counts do not depend on the shard count.
SimReport simulate(const SimScenario& scenario);

/// Simulation of draws [first, first + count); building block of simulate.
SimReport simulate_units(const SimScenario& scenario, std::uint64_t first, std::uint64_t count);

struct MinAntennasOptions {
    std::uint64_t symbol_cap = 2'000'000;
    std::uint64_t min_bit_errors = 100;
    std::uint64_t first_chunk = 4096;
};

struct AntennaProbe {
    int antennas;
    SimReport report;
    bool meets_target;
};

struct MinAntennasResult {
    std::optional<int> antennas;  ///< nullopt: target not reached within n_max
    std::vector<AntennaProbe> probes;
};

/// Smallest antenna count whose BER Wilson upper bound is below target.
MinAntennasResult min_antennas(const SimScenario& scenario, double target_ber, int n_max,
                               const MinAntennasOptions& options = {});

struct Histogram {
    std::vector<double> edges;                      ///< bins + 1 ascending edges
    std::vector<std::vector<std::uint64_t>> counts;  ///< [symbol][bin]
    std::vector<double> centers;                     ///< r(p_k)
    std::vector<double> boundaries;
    std::vector<double> means;
    std::vector<double> variances;
    /// Fraction of each symbol's statistic falling outside its own region.
    std::vector<double> outside_fraction;

    double overlap() const;
};

Histogram histogram(const Constellation& constellation, const ChannelSpec& channel, double sigma2,
                    int antennas, std::uint64_t trials, int bins, std::uint64_t seed);

}  // namespace enmod
