#include "enmod/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "enmod/errors.hpp"
#include "enmod/rng.hpp"

namespace enmod {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

std::uint64_t data_per_unit(const SimScenario& s) {
    if (const auto* pam = std::get_if<PilotPamScheme>(&s.scheme))
        return static_cast<std::uint64_t>(pam->coherence - pam->pilots);
    return 1;
}

std::uint64_t units_for(const SimScenario& s) {
    const std::uint64_t per = data_per_unit(s);
    return (s.symbols + per - 1) / per;
}

void finalize(SimReport& r) {
    r.ser = r.symbols ? static_cast<double>(r.symbol_errors) / static_cast<double>(r.symbols) : 0.0;
    r.ber = r.bits ? static_cast<double>(r.bit_errors) / static_cast<double>(r.bits)
                   : std::numeric_limits<double>::quiet_NaN();
    r.ser_ci = wilson_interval(r.symbol_errors, r.symbols);
    r.ber_ci = r.bits ? wilson_interval(r.bit_errors, r.bits) : Interval{0.0, 1.0};
}

void merge_into(SimReport& total, const SimReport& part) {
    total.symbols += part.symbols;
    total.symbol_errors += part.symbol_errors;
    total.bits += part.bits;
    total.bit_errors += part.bit_errors;
    if (total.sent_per_symbol.size() < part.sent_per_symbol.size()) {
        total.sent_per_symbol.resize(part.sent_per_symbol.size(), 0);
        total.errors_per_symbol.resize(part.errors_per_symbol.size(), 0);
    }
    for (std::size_t k = 0; k < part.sent_per_symbol.size(); ++k) {
        total.sent_per_symbol[k] += part.sent_per_symbol[k];
        total.errors_per_symbol[k] += part.errors_per_symbol[k];
    }
}

struct Tally {
    SimReport& report;
    int bits;

    void record(std::size_t sent, std::size_t decided) {
        ++report.symbols;
        ++report.sent_per_symbol[sent];
        report.bits += static_cast<std::uint64_t>(bits);
        if (sent == decided) return;
        ++report.symbol_errors;
        ++report.errors_per_symbol[sent];
        const auto a = gray_map(static_cast<std::uint32_t>(sent), bits);
        const auto b = gray_map(static_cast<std::uint32_t>(decided), bits);
        report.bit_errors += static_cast<std::uint64_t>(std::popcount(a ^ b));
    }
};

std::span<const double> tx_levels(const Scheme& scheme) {
    return std::visit(Overloaded{
                          [](const EnergyRegionsScheme& s) { return s.regions.levels(); },
                          [](const NoncoherentMlScheme& s) { return std::span<const double>(s.levels); },
                          [](const AskEnergyMlScheme& s) { return std::span<const double>(s.levels); },
                          [](const PilotPamScheme& s) { return std::span<const double>(s.pam.amplitudes); },
                      },
                      scheme);
}

void run_noncoherent(const SimScenario& s, std::uint64_t first, std::uint64_t count, Tally& tally) {
    const auto levels = tx_levels(s.scheme);
    const std::size_t size = levels.size();
    const int n = s.antennas;
    std::vector<cplx> y(static_cast<std::size_t>(n));
    for (std::uint64_t u = first; u < first + count; ++u) {
        CounterRng rng(s.seed, u);
        const std::size_t k = size > 1 ? static_cast<std::size_t>(rng.below(size)) : 0;
        const double amp = std::sqrt(levels[k]);
        for (auto& yi : y) {
            const cplx h = sample_coefficient(s.true_channel, rng);
            yi = h * amp + rng.complex_normal(s.true_sigma2);
        }
        const std::size_t decided = std::visit(
            Overloaded{
                [&](const EnergyRegionsScheme& sc) { return energy_decode(sc.regions, energy_statistic(y)); },
                [&](const NoncoherentMlScheme& sc) { return ml_noncoherent_rician(y, sc.levels, sc.assumed); },
                [&](const AskEnergyMlScheme& sc) {
                    return ml_energy_ask(energy_statistic(y), n, sc.levels, sc.assumed);
                },
                [](const PilotPamScheme&) -> std::size_t { return 0; },
            },
            s.scheme);
        tally.record(k, decided);
    }
}

void run_pilot_pam(const SimScenario& s, const PilotPamScheme& sc, std::uint64_t first, std::uint64_t count,
                   Tally& tally) {
    const int n = s.antennas;
    const auto& amps = sc.pam.amplitudes;
    std::vector<cplx> h(static_cast<std::size_t>(n));
    std::vector<std::size_t> sent(static_cast<std::size_t>(sc.coherence));
    for (std::uint64_t u = first; u < first + count; ++u) {
        CounterRng rng(s.seed, u);
        for (auto& hi : h) hi = sample_coefficient(s.true_channel, rng);
        ReceivedBlock block(n, sc.coherence, sc.pilots);
        for (int t = 0; t < sc.coherence; ++t) {
            double x = sc.pilot_amplitude;
            if (t >= sc.pilots) {
                sent[t] = static_cast<std::size_t>(rng.below(amps.size()));
                x = amps[sent[t]];
            }
            auto col = block.column(t);
            for (int i = 0; i < n; ++i) col[i] = h[i] * x + rng.complex_normal(s.true_sigma2);
        }
        const std::vector<cplx> h_hat =
            sc.pilots > 0 ? pilot_mmse_estimate(block, sc.pilots, sc.pilot_amplitude, sc.assumed)
                          : std::vector<cplx>(static_cast<std::size_t>(n), cplx(sc.assumed.mean, 0.0));
        for (int t = sc.pilots; t < sc.coherence; ++t)
            tally.record(sent[t], coherent_pam_decode(block.column(t), h_hat, amps));
    }
}

}  // namespace

void SimScenario::validate() const {
    detail::require(antennas >= 1, "need at least one antenna");
    detail::require(true_sigma2 > 0.0 && std::isfinite(true_sigma2), "true noise power must be positive");
    detail::require(shards >= 1, "shard count must be positive");
    detail::require(symbols >= 1, "symbol budget must be positive");
    if (!true_channel.samplable()) throw NotSamplable();
    std::visit(Overloaded{
                   [](const EnergyRegionsScheme& s) {
                       detail::require(s.regions.has_regions(), "energy scheme needs decoding regions");
                   },
                   [](const NoncoherentMlScheme& s) {
                       detail::require(!s.levels.empty() && s.assumed.sigma2 > 0.0, "invalid ML scheme");
                   },
                   [](const AskEnergyMlScheme& s) {
                       detail::require(!s.levels.empty() && s.assumed.sigma2 > 0.0, "invalid energy-ML scheme");
                   },
                   [](const PilotPamScheme& s) {
                       detail::require(!s.pam.amplitudes.empty(), "empty PAM constellation");
                       detail::require(s.coherence >= 1 && s.pilots >= 0 && s.pilots < s.coherence,
                                       "need 0 <= pilots < coherence time");
                       detail::require(s.assumed.sigma2 > 0.0, "assumed noise power must be positive");
                   },
               },
               scheme);
}

std::size_t SimScenario::constellation_size() const { return tx_levels(scheme).size(); }

int SimScenario::bits_per_symbol() const { return ceil_log2(constellation_size()); }

double SimScenario::effective_rate() const {
    const double bits = std::log2(static_cast<double>(constellation_size()));
    if (const auto* pam = std::get_if<PilotPamScheme>(&scheme))
        return bits * static_cast<double>(pam->coherence - pam->pilots) / static_cast<double>(pam->coherence);
    return bits;
}

Interval wilson_interval(std::uint64_t events, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(events) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, std::min(center - half, p)), std::min(1.0, std::max(center + half, p))};
}

double SimReport::ser_standard_error() const {
    if (symbols == 0) return 0.0;
    return std::sqrt(ser * (1.0 - ser) / static_cast<double>(symbols));
}

SimReport simulate_units(const SimScenario& scenario, std::uint64_t first, std::uint64_t count) {
    SimReport r;
    r.seed = scenario.seed;
    r.sent_per_symbol.assign(scenario.constellation_size(), 0);
    r.errors_per_symbol.assign(scenario.constellation_size(), 0);
    Tally tally{r, scenario.bits_per_symbol()};
    if (const auto* pam = std::get_if<PilotPamScheme>(&scenario.scheme))
        run_pilot_pam(scenario, *pam, first, count, tally);
    else
        run_noncoherent(scenario, first, count, tally);
    finalize(r);
    return r;
}

SimReport simulate(const SimScenario& scenario) {
    scenario.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t units = units_for(scenario);
    const auto shards = static_cast<std::uint64_t>(scenario.shards);

    std::vector<SimReport> parts(shards);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t j = next++; j < shards; j = next++) {
            const std::uint64_t lo = units * j / shards;
            const std::uint64_t hi = units * (j + 1) / shards;
            parts[j] = simulate_units(scenario, lo, hi - lo);
        }
    };
    const auto hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(shards, hw));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    SimReport total;
    total.sent_per_symbol.assign(scenario.constellation_size(), 0);
    total.errors_per_symbol.assign(scenario.constellation_size(), 0);
    for (const auto& part : parts) merge_into(total, part);
    total.seed = scenario.seed;
    total.shards = scenario.shards;
    finalize(total);
    total.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return total;
}

namespace {

SimReport adaptive_ber(const SimScenario& scenario, const MinAntennasOptions& options) {
    const std::uint64_t per = data_per_unit(scenario);
    const std::uint64_t cap_units = std::max<std::uint64_t>(1, (options.symbol_cap + per - 1) / per);
    std::uint64_t done = 0;
    std::uint64_t chunk = std::max<std::uint64_t>(1, options.first_chunk / per);
    SimReport total;
    total.sent_per_symbol.assign(scenario.constellation_size(), 0);
    total.errors_per_symbol.assign(scenario.constellation_size(), 0);
    while (done < cap_units && total.bit_errors < options.min_bit_errors) {
        const std::uint64_t take = std::min(chunk, cap_units - done);
        SimScenario part = scenario;
        part.symbols = take * per;
        merge_into(total, simulate_units(part, done, take));
        done += take;
        chunk *= 2;
    }
    total.seed = scenario.seed;
    total.shards = 1;
    finalize(total);
    return total;
}

}  // namespace

MinAntennasResult min_antennas(const SimScenario& scenario, double target_ber, int n_max,
                               const MinAntennasOptions& options) {
    detail::require(target_ber > 0.0 && target_ber <= 0.5, "target BER must lie in (0, 0.5]");
    detail::require(n_max >= 1, "antenna cap must be positive");
    scenario.validate();
    detail::require(scenario.bits_per_symbol() > 0, "BER needs at least two symbols");

    MinAntennasResult result;
    auto probe = [&](int n) {
        SimScenario s = scenario;
        s.antennas = n;
        SimReport report = adaptive_ber(s, options);
        const bool ok = report.ber_ci.high < target_ber;
        result.probes.push_back({n, std::move(report), ok});
        return ok;
    };

    int lo = 0;  // largest count known to fail
    int hi = 1;
    while (!probe(hi)) {
        lo = hi;
        if (hi >= n_max) return result;
        hi = std::min(2 * hi, n_max);
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (probe(mid))
            hi = mid;
        else
            lo = mid;
    }
    result.antennas = hi;
    return result;
}

double Histogram::overlap() const {
    if (outside_fraction.empty()) return 0.0;
    double sum = 0.0;
    for (double f : outside_fraction) sum += f;
    return sum / static_cast<double>(outside_fraction.size());
}

Histogram histogram(const Constellation& constellation, const ChannelSpec& channel, double sigma2,
                    int antennas, std::uint64_t trials, int bins, std::uint64_t seed) {
    detail::require(bins >= 10, "need at least 10 bins");
    detail::require(trials >= 2, "need at least two trials per symbol");
    detail::require(antennas >= 1, "need at least one antenna");
    detail::require(constellation.has_regions(), "constellation has no decoding regions");
    if (!channel.samplable()) throw NotSamplable();

    const std::size_t size = constellation.size();
    std::vector<std::vector<double>> stats(size, std::vector<double>(trials));
    std::vector<cplx> y(static_cast<std::size_t>(antennas));
    double top = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
        const double amp = std::sqrt(constellation.level(k));
        for (std::uint64_t j = 0; j < trials; ++j) {
            CounterRng rng(seed, k * trials + j);
            for (auto& yi : y) yi = sample_coefficient(channel, rng) * amp + rng.complex_normal(sigma2);
            stats[k][j] = energy_statistic(y);
            top = std::max(top, stats[k][j]);
        }
    }

    Histogram h;
    const double width = top / bins;
    for (int b = 0; b <= bins; ++b) h.edges.push_back(width * b);
    h.counts.assign(size, std::vector<std::uint64_t>(static_cast<std::size_t>(bins), 0));
    h.boundaries.assign(constellation.boundaries().begin(), constellation.boundaries().end());
    for (std::size_t k = 0; k < size; ++k) {
        h.centers.push_back(constellation.center(k));
        double sum = 0.0;
        double sum_sq = 0.0;
        std::uint64_t outside = 0;
        for (double v : stats[k]) {
            const auto bin = std::min<std::size_t>(static_cast<std::size_t>(v / width), bins - 1);
            ++h.counts[k][bin];
            sum += v;
            sum_sq += v * v;
            if (energy_decode(constellation, v) != k) ++outside;
        }
        const double t = static_cast<double>(trials);
        const double mean = sum / t;
        h.means.push_back(mean);
        h.variances.push_back((sum_sq - t * mean * mean) / (t - 1.0));
        h.outside_fraction.push_back(static_cast<double>(outside) / t);
    }
    return h;
}

}  // namespace enmod
