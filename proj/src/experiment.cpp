#include "enmod/experiment.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "enmod/errors.hpp"
#include "enmod/rates.hpp"

namespace enmod::experiment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string joined(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

const json& field(const json& config, const char* block, const char* key) {
    return config.at(block).at(key);
}

double as_double(const json& v, const std::string& name) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ConfigError(name + ": expected a number");
}

std::optional<double> as_optional_double(const json& v, const std::string& name) {
    if (v.is_null()) return std::nullopt;
    return as_double(v, name);
}

std::int64_t as_int(const json& v, const std::string& name) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(name + ": expected an integer");
}

std::uint64_t as_count(const json& v, const std::string& name) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const auto i = as_int(v, name);
    if (i < 0) throw ConfigError(name + ": must be nonnegative");
    return static_cast<std::uint64_t>(i);
}

std::string as_string(const json& v, const std::string& name) {
    if (!v.is_string()) throw ConfigError(name + ": expected a string");
    return v.get<std::string>();
}

void require_config(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
    for (const char* o : options)
        if (s == o) return true;
    return false;
}

json number_or_string(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json vector_json(std::span<const double> values) {
    json out = json::array();
    for (double v : values) out.push_back(number_or_string(v));
    return out;
}

std::vector<double> vector_from(const json& v, const std::string& name) {
    require_config(v.is_array(), name + ": expected an array");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_double(e, name));
    return out;
}

std::string scheme_label(const ExperimentConfig& cfg) {
    if (cfg.sim.scheme == "energy") return "energy-" + cfg.design.method;
    if (cfg.sim.scheme == "ml") return "ml-" + cfg.design.method;
    return cfg.sim.scheme;
}

std::string describe_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
                return v;
            else if constexpr (std::is_same_v<T, double>)
                return format_number(v);
            else
                return std::to_string(v);
        },
        cell);
}

}  // namespace

ChannelSpec ChannelBlock::spec() const {
    if (kind == "rayleigh") return ChannelSpec::rayleigh();
    if (kind == "nakagami") return ChannelSpec::nakagami(m ? *m : nakagami_m_from_k(k_db));
    return ChannelSpec::rician_db(k_db);
}

ChannelBlock ExperimentConfig::true_channel() const {
    ChannelBlock truth = channel;
    if (sim.true_k_db) {
        truth.k_db = *sim.true_k_db;
        if (truth.kind == "rayleigh") truth.kind = "rician";
    }
    if (sim.true_gamma_db) truth.gamma_db = *sim.true_gamma_db;
    if (sim.true_m) truth.m = sim.true_m;
    return truth;
}

json default_config() {
    return json{
        {"command", ""},
        {"channel", {{"kind", "rician"}, {"K_dB", "-inf"}, {"m", nullptr}, {"gamma_dB", 10.0}}},
        {"design",
         {{"method", "exact"},
          {"L", 4},
          {"epsilon", 1e-6},
          {"budget", 1.0},
          {"a_dB", nullptr},
          {"alpha1_min", nullptr},
          {"alpha1_max", nullptr},
          {"sigma2_min", nullptr},
          {"sigma2_max", nullptr},
          {"artifact", ""}}},
        {"sim",
         {{"n", json::array({100})},
          {"symbols", 100000},
          {"seed", 1},
          {"shards", 1},
          {"scheme", "energy"},
          {"T", 10},
          {"T_l", 1},
          {"true_K_dB", nullptr},
          {"true_gamma_dB", nullptr},
          {"true_m", nullptr},
          {"target_ber", 1e-3},
          {"n_max", 2048},
          {"symbol_cap", 2000000},
          {"trials", 2000},
          {"bins", 50}}},
        {"output", {{"path", ""}, {"format", "csv"}}},
    };
}

json parse_config_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

namespace {

void merge_at(json& base, const json& patch, const std::string& prefix) {
    require_config(patch.is_object(), (prefix.empty() ? std::string("config") : prefix) + ": expected an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string name = joined(prefix, it.key());
        require_config(base.contains(it.key()), "unknown field '" + name + "'");
        json& slot = base[it.key()];
        if (slot.is_object())
            merge_at(slot, it.value(), name);
        else
            slot = it.value();
    }
}

}  // namespace

void merge_config(json& base, const json& patch) { merge_at(base, patch, ""); }

void apply_override(json& config, const std::string& dotted, const std::string& value) {
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        require_config(!key.empty() && node->is_object() && node->contains(key), "unknown field '" + dotted + "'");
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    require_config(!node->is_object(), "field '" + dotted + "' is a block, not a value");
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded() || parsed.is_object()) parsed = value;
    *node = parsed;
}

ExperimentConfig interpret(const json& config) {
    ExperimentConfig cfg;
    require_config(config.is_object(), "config: expected an object");
    json merged = default_config();
    merge_config(merged, config);

    cfg.command = as_string(merged.at("command"), "command");

    auto& ch = cfg.channel;
    ch.kind = as_string(field(merged, "channel", "kind"), "channel.kind");
    require_config(one_of(ch.kind, {"rician", "rayleigh", "nakagami"}),
                   "channel.kind: expected rician, rayleigh or nakagami");
    const json& k = field(merged, "channel", "K_dB");
    ch.k_db = k.is_null() ? -kInf : as_double(k, "channel.K_dB");
    ch.m = as_optional_double(field(merged, "channel", "m"), "channel.m");
    ch.gamma_db = as_double(field(merged, "channel", "gamma_dB"), "channel.gamma_dB");
    require_config(std::isfinite(ch.gamma_db), "channel.gamma_dB: must be finite");
    require_config(!std::isnan(ch.k_db), "channel.K_dB: must be a number");
    if (ch.kind == "nakagami") {
        require_config(ch.m.has_value() || std::isfinite(ch.k_db),
                       "channel.m: nakagami needs m or a finite K_dB to match");
        require_config(!ch.m || *ch.m >= 0.5, "channel.m: must be at least 0.5");
    }

    auto& d = cfg.design;
    d.method = as_string(field(merged, "design", "method"), "design.method");
    require_config(one_of(d.method, {"exact", "moments", "robust", "mindist", "ask"}),
                   "design.method: expected exact, moments, robust, mindist or ask");
    d.levels = static_cast<int>(as_int(field(merged, "design", "L"), "design.L"));
    require_config(d.levels >= 1 && d.levels <= 1024, "design.L: must lie in [1, 1024]");
    d.epsilon = as_double(field(merged, "design", "epsilon"), "design.epsilon");
    require_config(d.epsilon > 0.0 && d.epsilon < 1.0, "design.epsilon: must lie in (0, 1)");
    d.budget = as_double(field(merged, "design", "budget"), "design.budget");
    require_config(d.budget > 0.0 && std::isfinite(d.budget), "design.budget: must be positive");
    d.a_db = as_optional_double(field(merged, "design", "a_dB"), "design.a_dB");
    d.alpha1_min = as_optional_double(field(merged, "design", "alpha1_min"), "design.alpha1_min");
    d.alpha1_max = as_optional_double(field(merged, "design", "alpha1_max"), "design.alpha1_max");
    d.sigma2_min = as_optional_double(field(merged, "design", "sigma2_min"), "design.sigma2_min");
    d.sigma2_max = as_optional_double(field(merged, "design", "sigma2_max"), "design.sigma2_max");
    d.artifact = as_string(field(merged, "design", "artifact"), "design.artifact");
    const bool box = d.alpha1_min && d.alpha1_max && d.sigma2_min && d.sigma2_max;
    const bool partial_box = d.alpha1_min || d.alpha1_max || d.sigma2_min || d.sigma2_max;
    require_config(box || !partial_box, "design: alpha1_min, alpha1_max, sigma2_min and sigma2_max go together");
    if (d.method == "robust") {
        require_config(box || d.a_db.has_value(), "design.a_dB: robust method requires uncertainty half-widths");
        require_config(box || ch.kind != "nakagami", "design.a_dB: half-widths apply to Rician channels only");
        require_config(!d.a_db || *d.a_db >= 0.0, "design.a_dB: must be nonnegative");
    }

    auto& s = cfg.sim;
    const json& n = field(merged, "sim", "n");
    s.antennas.clear();
    if (n.is_array()) {
        for (const auto& e : n) s.antennas.push_back(static_cast<int>(as_int(e, "sim.n")));
    } else {
        s.antennas.push_back(static_cast<int>(as_int(n, "sim.n")));
    }
    require_config(!s.antennas.empty(), "sim.n: need at least one antenna count");
    for (int a : s.antennas) require_config(a >= 1 && a <= 1 << 20, "sim.n: antenna counts must be positive");
    s.symbols = as_count(field(merged, "sim", "symbols"), "sim.symbols");
    require_config(s.symbols >= 1000, "sim.symbols: budget must be at least 1000");
    s.seed = as_count(field(merged, "sim", "seed"), "sim.seed");
    s.shards = static_cast<int>(as_int(field(merged, "sim", "shards"), "sim.shards"));
    require_config(s.shards >= 1 && s.shards <= 4096, "sim.shards: must lie in [1, 4096]");
    s.scheme = as_string(field(merged, "sim", "scheme"), "sim.scheme");
    require_config(one_of(s.scheme, {"energy", "ml", "ask-ml", "pam"}),
                   "sim.scheme: expected energy, ml, ask-ml or pam");
    s.coherence = static_cast<int>(as_int(field(merged, "sim", "T"), "sim.T"));
    s.pilots = static_cast<int>(as_int(field(merged, "sim", "T_l"), "sim.T_l"));
    if (s.scheme == "pam") {
        require_config(s.coherence >= 1, "sim.T: must be positive");
        require_config(s.pilots >= 0 && s.pilots < s.coherence, "sim.T_l: need 0 <= T_l < T");
        require_config(std::has_single_bit(static_cast<unsigned>(d.levels)) && d.levels >= 2,
                       "design.L: PAM needs a power of two of at least 2");
    }
    s.true_k_db = as_optional_double(field(merged, "sim", "true_K_dB"), "sim.true_K_dB");
    s.true_gamma_db = as_optional_double(field(merged, "sim", "true_gamma_dB"), "sim.true_gamma_dB");
    s.true_m = as_optional_double(field(merged, "sim", "true_m"), "sim.true_m");
    require_config(!s.true_gamma_db || std::isfinite(*s.true_gamma_db), "sim.true_gamma_dB: must be finite");
    s.target_ber = as_double(field(merged, "sim", "target_ber"), "sim.target_ber");
    require_config(s.target_ber > 0.0 && s.target_ber <= 0.5, "sim.target_ber: must lie in (0, 0.5]");
    s.n_max = static_cast<int>(as_int(field(merged, "sim", "n_max"), "sim.n_max"));
    require_config(s.n_max >= 1 && s.n_max <= 1 << 16, "sim.n_max: must lie in [1, 65536]");
    s.symbol_cap = as_count(field(merged, "sim", "symbol_cap"), "sim.symbol_cap");
    require_config(s.symbol_cap >= 1000, "sim.symbol_cap: must be at least 1000");
    s.trials = as_count(field(merged, "sim", "trials"), "sim.trials");
    require_config(s.trials >= 2, "sim.trials: must be at least 2");
    s.bins = static_cast<int>(as_int(field(merged, "sim", "bins"), "sim.bins"));
    require_config(s.bins >= 10 && s.bins <= 100000, "sim.bins: must be at least 10");

    cfg.output.path = as_string(field(merged, "output", "path"), "output.path");
    cfg.output.format = as_string(field(merged, "output", "format"), "output.format");
    require_config(one_of(cfg.output.format, {"csv", "json"}), "output.format: expected csv or json");
    return cfg;
}

std::string config_hash(const json& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DesignArtifact run_design(const ExperimentConfig& cfg) {
    const auto& d = cfg.design;
    const ChannelSpec channel = cfg.channel.spec();
    const double sigma2 = cfg.channel.sigma2();
    DesignConfig dc;
    dc.levels = d.levels;
    dc.power_budget = d.budget;
    dc.tolerance = d.epsilon;

    DesignArtifact out;
    out.method = d.method;
    auto from_outcome = [&](const DesignOutcome& o) {
        out.feasible = o.feasible;
        out.constellation = o.constellation;
        out.t_star = o.t_star;
        out.diagnostics = o.diagnostics;
    };
    auto from_fixed = [&](Constellation c) {
        out.feasible = true;
        out.t_star = error_exponent(c, channel, sigma2);
        for (const auto& e : boundary_exponents(c, channel, sigma2)) {
            out.diagnostics.right_exponents.push_back(e.right);
            out.diagnostics.left_exponents.push_back(e.left);
        }
        out.diagnostics.mean_power = c.mean_power();
        out.constellation = std::move(c);
    };

    if (d.method == "exact") {
        from_outcome(design_exact(channel, sigma2, dc));
    } else if (d.method == "moments") {
        from_outcome(design_moments(channel.alpha1(), sigma2, dc));
    } else if (d.method == "robust") {
        UncertaintyBox box{};
        if (d.alpha1_min) {
            box = UncertaintyBox{*d.alpha1_min, *d.alpha1_max, std::sqrt(*d.sigma2_min), std::sqrt(*d.sigma2_max)};
        } else {
            box = UncertaintyBox::around_rician(cfg.channel.k_db, cfg.channel.gamma_db, *d.a_db);
        }
        from_outcome(design_robust(box, dc));
    } else if (d.method == "mindist") {
        from_fixed(min_distance_constellation(d.levels, sigma2));
    } else {
        const auto ask = ask_constellation(d.levels);
        from_fixed(equalize_regions({ask.levels().begin(), ask.levels().end()}, channel, sigma2));
    }
    return out;
}

json artifact_to_json(const DesignArtifact& a, const json& config) {
    json doc;
    doc["status"] = a.feasible ? "feasible" : "infeasible";
    doc["feasible"] = a.feasible;
    doc["method"] = a.method;
    doc["config_hash"] = config_hash(config);
    doc["config"] = config;
    if (!a.feasible) return doc;
    const auto& c = a.constellation;
    doc["L"] = c.size();
    doc["levels"] = vector_json(c.levels());
    doc["boundaries"] = vector_json(c.boundaries());
    doc["sigma2_design"] = number_or_string(c.sigma2_design());
    doc["t_star"] = number_or_string(a.t_star);
    doc["diagnostics"] = {
        {"right_exponents", vector_json(a.diagnostics.right_exponents)},
        {"left_exponents", vector_json(a.diagnostics.left_exponents)},
        {"mean_power", number_or_string(a.diagnostics.mean_power)},
        {"iterations", a.diagnostics.iterations},
    };
    return doc;
}

DesignArtifact artifact_from_json(const json& doc) {
    require_config(doc.is_object(), "artifact: expected an object");
    require_config(doc.contains("feasible") && doc.at("feasible").is_boolean(), "artifact.feasible: missing");
    DesignArtifact a;
    a.feasible = doc.at("feasible").get<bool>();
    if (doc.contains("method")) a.method = as_string(doc.at("method"), "artifact.method");
    if (!a.feasible) return a;
    for (const char* key : {"levels", "boundaries", "sigma2_design", "t_star"})
        require_config(doc.contains(key), std::string("artifact.") + key + ": missing");
    try {
        a.constellation = Constellation(vector_from(doc.at("levels"), "artifact.levels"),
                                        vector_from(doc.at("boundaries"), "artifact.boundaries"),
                                        as_double(doc.at("sigma2_design"), "artifact.sigma2_design"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("artifact: ") + e.what());
    }
    a.t_star = as_double(doc.at("t_star"), "artifact.t_star");
    if (doc.contains("diagnostics")) {
        const auto& dg = doc.at("diagnostics");
        a.diagnostics.right_exponents = vector_from(dg.at("right_exponents"), "artifact.diagnostics");
        a.diagnostics.left_exponents = vector_from(dg.at("left_exponents"), "artifact.diagnostics");
        a.diagnostics.mean_power = as_double(dg.at("mean_power"), "artifact.diagnostics.mean_power");
        a.diagnostics.iterations = static_cast<int>(as_int(dg.at("iterations"), "artifact.diagnostics"));
    }
    return a;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Table& table, const json& config) {
    const ExperimentConfig cfg = interpret(config);
    os << "# enmod " << cfg.command << "\n";
    os << "# seed=" << cfg.sim.seed << " shards=" << cfg.sim.shards << " config_hash=" << config_hash(config)
       << "\n";
    os << "# config=" << config.dump() << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << describe_cell(row[i]);
        os << "\n";
    }
}

void write_json(std::ostream& os, const Table& table, const json& config) {
    const ExperimentConfig cfg = interpret(config);
    json doc;
    doc["config"] = config;
    doc["provenance"] = {{"command", cfg.command},
                         {"seed", cfg.sim.seed},
                         {"shards", cfg.sim.shards},
                         {"config_hash", config_hash(config)}};
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>)
                        r[table.columns[i]] = number_or_string(v);
                    else
                        r[table.columns[i]] = v;
                },
                row[i]);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << "\n";
}

namespace {

AssumedStats assumed_stats(const ExperimentConfig& cfg) {
    const ChannelSpec nominal = cfg.channel.spec();
    return {nominal.mean(), nominal.scatter_variance(), cfg.channel.sigma2()};
}

SimScenario make_scenario(const ExperimentConfig& cfg, const DesignArtifact& artifact, int antennas) {
    const ChannelBlock truth = cfg.true_channel();
    SimScenario s{EnergyRegionsScheme{artifact.constellation}, truth.spec(), truth.sigma2(), antennas,
                  cfg.sim.symbols, cfg.sim.seed, cfg.sim.shards};
    const auto& levels = artifact.constellation.levels();
    if (cfg.sim.scheme == "ml") {
        s.scheme = NoncoherentMlScheme{{levels.begin(), levels.end()}, assumed_stats(cfg)};
    } else if (cfg.sim.scheme == "ask-ml") {
        const auto ask = ask_constellation(cfg.design.levels);
        s.scheme = AskEnergyMlScheme{{ask.levels().begin(), ask.levels().end()}, assumed_stats(cfg)};
    } else if (cfg.sim.scheme == "pam") {
        s.scheme = PilotPamScheme{pam_constellation(cfg.design.levels), cfg.sim.coherence, cfg.sim.pilots,
                                  assumed_stats(cfg), 1.0};
    }
    return s;
}

}  // namespace

Table evaluate_table(const ExperimentConfig& cfg, const DesignArtifact& artifact) {
    const ChannelBlock truth = cfg.true_channel();
    const ChannelSpec channel = truth.spec();
    const double sigma2 = truth.sigma2();
    const auto& c = artifact.constellation;
    Table t;
    t.columns = {"n", "chernoff_bound", "I_e"};
    const auto exps = boundary_exponents(c, channel, sigma2);
    for (std::size_t k = 0; k < exps.size(); ++k) {
        t.columns.push_back("right_" + std::to_string(k));
        t.columns.push_back("left_" + std::to_string(k + 1));
    }
    const double ie = error_exponent(c, channel, sigma2);
    for (int n : cfg.sim.antennas) {
        std::vector<Cell> row{std::int64_t{n}, chernoff_ser_bound(c, channel, sigma2, n), ie};
        for (const auto& e : exps) {
            row.emplace_back(e.right);
            row.emplace_back(e.left);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table simulate_table(const ExperimentConfig& cfg, const DesignArtifact& artifact) {
    Table t;
    t.columns = {"scheme", "n",   "symbols", "symbol_errors", "bit_errors", "SER",  "SER_low",
                 "SER_high", "BER", "BER_low", "BER_high",    "seed"};
    for (int n : cfg.sim.antennas) {
        const SimReport r = simulate(make_scenario(cfg, artifact, n));
        t.rows.push_back({scheme_label(cfg), std::int64_t{n}, static_cast<std::int64_t>(r.symbols),
                          static_cast<std::int64_t>(r.symbol_errors), static_cast<std::int64_t>(r.bit_errors),
                          r.ser, r.ser_ci.low, r.ser_ci.high, r.ber, r.ber_ci.low, r.ber_ci.high,
                          static_cast<std::int64_t>(r.seed)});
    }
    return t;
}

Table sweep_table(const ExperimentConfig& cfg, const DesignArtifact& artifact) {
    Table t;
    t.columns = {"n", "SER", "BER", "CI_low", "CI_high", "symbols", "seed"};
    for (int n : cfg.sim.antennas) {
        const SimReport r = simulate(make_scenario(cfg, artifact, n));
        t.rows.push_back({std::int64_t{n}, r.ser, r.ber, r.ser_ci.low, r.ser_ci.high,
                          static_cast<std::int64_t>(r.symbols), static_cast<std::int64_t>(r.seed)});
    }
    return t;
}

Table min_antennas_table(const ExperimentConfig& cfg, const DesignArtifact& artifact) {
    const SimScenario s = make_scenario(cfg, artifact, 1);
    MinAntennasOptions options;
    options.symbol_cap = cfg.sim.symbol_cap;
    const auto result = min_antennas(s, cfg.sim.target_ber, cfg.sim.n_max, options);
    const bool pam = cfg.sim.scheme == "pam";
    Table t;
    t.columns = {"scheme", "L", "T", "T_l", "effective_rate", "target_ber", "n_star"};
    Cell n_star = std::string("NOT_REACHED");
    if (result.antennas) n_star = std::int64_t{*result.antennas};
    t.rows.push_back({scheme_label(cfg), static_cast<std::int64_t>(s.constellation_size()),
                      std::int64_t{pam ? cfg.sim.coherence : 1}, std::int64_t{pam ? cfg.sim.pilots : 0},
                      s.effective_rate(), cfg.sim.target_ber, n_star});
    return t;
}

Table histogram_table(const ExperimentConfig& cfg, const DesignArtifact& artifact) {
    const ChannelBlock truth = cfg.true_channel();
    const int n = cfg.sim.antennas.front();
    const Histogram h = histogram(artifact.constellation, truth.spec(), truth.sigma2(), n, cfg.sim.trials,
                                  cfg.sim.bins, cfg.sim.seed);
    Table t;
    t.columns = {"kind", "symbol", "bin_left", "bin_right", "count", "value"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < h.counts.size(); ++k)
        for (std::size_t b = 0; b < h.counts[k].size(); ++b)
            t.rows.push_back({std::string("bin"), static_cast<std::int64_t>(k), h.edges[b], h.edges[b + 1],
                              static_cast<std::int64_t>(h.counts[k][b]), nan});
    for (std::size_t k = 0; k < h.boundaries.size(); ++k)
        t.rows.push_back({std::string("boundary"), static_cast<std::int64_t>(k), nan, nan, std::int64_t{0},
                          h.boundaries[k]});
    for (std::size_t k = 0; k < h.centers.size(); ++k)
        t.rows.push_back({std::string("center"), static_cast<std::int64_t>(k), nan, nan, std::int64_t{0},
                          h.centers[k]});
    for (std::size_t k = 0; k < h.outside_fraction.size(); ++k)
        t.rows.push_back({std::string("outside"), static_cast<std::int64_t>(k), nan, nan, std::int64_t{0},
                          h.outside_fraction[k]});
    t.rows.push_back({std::string("overlap"), std::int64_t{-1}, nan, nan, std::int64_t{0}, h.overlap()});
    return t;
}

namespace {

void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write output file '" + path + "'");
    body(file);
}

DesignArtifact obtain_artifact(const ExperimentConfig& cfg) {
    if (cfg.design.artifact.empty()) return run_design(cfg);
    std::ifstream in(cfg.design.artifact);
    if (!in) throw ConfigError("design.artifact: cannot open '" + cfg.design.artifact + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return artifact_from_json(parse_config_text(buffer.str()));
}

}  // namespace

int run(const std::string& command, json config, std::ostream& out, std::ostream& err) {
    try {
        require_config(one_of(command, {"design", "evaluate", "simulate", "sweep-n", "min-antennas", "histogram"}),
                       "unknown command '" + command + "'");
        json merged = default_config();
        merge_config(merged, config);
        merged["command"] = command;
        const ExperimentConfig cfg = interpret(merged);

        if (command == "design") {
            const DesignArtifact a = run_design(cfg);
            emit(cfg.output.path, out, [&](std::ostream& os) { os << artifact_to_json(a, merged).dump(2) << "\n"; });
            if (!a.feasible) {
                err << "design infeasible: no positive exponent meets the power budget\n";
                return kInfeasible;
            }
            return kSuccess;
        }

        const DesignArtifact a = obtain_artifact(cfg);
        if (!a.feasible) {
            err << "design infeasible: nothing to evaluate\n";
            return kInfeasible;
        }
        Table table;
        if (command == "evaluate")
            table = evaluate_table(cfg, a);
        else if (command == "simulate")
            table = simulate_table(cfg, a);
        else if (command == "sweep-n")
            table = sweep_table(cfg, a);
        else if (command == "min-antennas")
            table = min_antennas_table(cfg, a);
        else
            table = histogram_table(cfg, a);
        emit(cfg.output.path, out, [&](std::ostream& os) {
            if (cfg.output.format == "json")
                write_json(os, table, merged);
            else
                write_csv(os, table, merged);
        });
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NotSamplable& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace enmod::experiment
