#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "enmod/channel.hpp"
#include "enmod/design.hpp"
#include "enmod/montecarlo.hpp"

namespace enmod::experiment {

using json = nlohmann::json;

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kInfeasible = 2 };

/// Malformed, unknown or inconsistent configuration field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChannelBlock {
    std::string kind = "rician";  ///< rician | rayleigh | nakagami
    double k_db = -std::numeric_limits<double>::infinity();
    std::optional<double> m;
    double gamma_db = 10.0;

    ChannelSpec spec() const;
    double sigma2() const { return sigma2_from_snr(gamma_db); }
};

struct DesignBlock {
    std::string method = "exact";  ///< exact | moments | robust | mindist | ask
    int levels = 4;
    double epsilon = 1e-6;
    double budget = 1.0;
    std::optional<double> a_db;
    std::optional<double> alpha1_min, alpha1_max, sigma2_min, sigma2_max;
    std::string artifact;
};

struct SimBlock {
    std::vector<int> antennas{100};
    std::uint64_t symbols = 100000;
    std::uint64_t seed = 1;
    int shards = 1;
    std::string scheme = "energy";  ///< energy | ml | ask-ml | pam
    int coherence = 10;
    int pilots = 1;
    std::optional<double> true_k_db;
    std::optional<double> true_gamma_db;
    std::optional<double> true_m;
    double target_ber = 1e-3;
    int n_max = 2048;
    std::uint64_t symbol_cap = 2'000'000;
    std::uint64_t trials = 2000;
    int bins = 50;
};

struct OutputBlock {
    std::string path;
    std::string format = "csv";
};

struct ExperimentConfig {
    std::string command;
    ChannelBlock channel;
    DesignBlock design;
    SimBlock sim;
    OutputBlock output;

    /// Channel the simulation draws from: the nominal one unless overridden.
    ChannelBlock true_channel() const;
};

/// Every recognised field with its default value.
json default_config();
/// Parses a JSON document; syntax errors carry line and column.
json parse_config_text(const std::string& text);
json load_config_file(const std::string& path);
/// Merges `patch` into `base`, rejecting fields absent from the schema.
void merge_config(json& base, const json& patch);
/// Sets a dotted field ("channel.K_dB") from its command-line text. The
/// value is read as JSON when possible and as a plain string otherwise.
void apply_override(json& config, const std::string& dotted, const std::string& value);
/// Typed, validated view of a config document.
ExperimentConfig interpret(const json& config);
/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const json& config);

/// Result of a design run as stored in the artifact file.
struct DesignArtifact {
    bool feasible = false;
    std::string method;
    Constellation constellation;
    double t_star = 0.0;
    DesignDiagnostics diagnostics;
};

DesignArtifact run_design(const ExperimentConfig& cfg);
json artifact_to_json(const DesignArtifact& artifact, const json& config);
DesignArtifact artifact_from_json(const json& doc);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_number(double value);
void write_csv(std::ostream& os, const Table& table, const json& config);
void write_json(std::ostream& os, const Table& table, const json& config);

Table evaluate_table(const ExperimentConfig& cfg, const DesignArtifact& artifact);
Table simulate_table(const ExperimentConfig& cfg, const DesignArtifact& artifact);
Table sweep_table(const ExperimentConfig& cfg, const DesignArtifact& artifact);
Table min_antennas_table(const ExperimentConfig& cfg, const DesignArtifact& artifact);
Table histogram_table(const ExperimentConfig& cfg, const DesignArtifact& artifact);

/// Runs `command` on a fully merged config, writing the table or artifact to
/// the configured path (or `out` when the path is empty) and diagnostics to
/// `err`. Returns the process exit code.
int run(const std::string& command, json config, std::ostream& out, std::ostream& err);

}  // namespace enmod::experiment
