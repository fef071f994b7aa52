#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "enmod/experiment.hpp"

namespace ex = enmod::experiment;

namespace {

// Splits leftover "--block.field value" / "--block.field=value" tokens.
std::vector<std::pair<std::string, std::string>> dotted_overrides(const std::vector<std::string>& extras) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& tok = extras[i];
        if (tok.rfind("--", 0) != 0 || tok.find('.') == std::string::npos)
            throw ex::ConfigError("unexpected argument '" + tok + "'");
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
            out.emplace_back(tok.substr(2, eq - 2), tok.substr(eq + 1));
        } else {
            if (i + 1 >= extras.size()) throw ex::ConfigError("missing value for '" + tok + "'");
            out.emplace_back(tok.substr(2), extras[++i]);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-based noncoherent SIMO constellation design and simulation"};
    app.require_subcommand(1);
    app.allow_extras();

    std::string config_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;
    int shards = 0;
    app.add_option("--config", config_path, "JSON experiment configuration");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (sim.seed)");
    auto* shards_opt = app.add_option("--shards", shards, "parallel shards (sim.shards)")->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out", out_path, "output file (output.path); stdout when omitted");
    auto* format_opt =
        app.add_option("--format", format, "table format (output.format)")->check(CLI::IsMember({"csv", "json"}));
    app.footer("Any config field can be overridden as --block.field VALUE, e.g. --channel.K_dB 0 --design.L 8.");

    const std::vector<std::pair<const char*, const char*>> commands{
        {"design", "design a constellation and write the artifact"},
        {"evaluate", "Chernoff bound and exponent table"},
        {"simulate", "Monte Carlo SER/BER"},
        {"sweep-n", "SER/BER over the antenna list"},
        {"min-antennas", "smallest n meeting the BER target"},
        {"histogram", "binned energy statistic per symbol"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->allow_extras()->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ex::kSuccess : ex::kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    ex::json config = ex::default_config();
    try {
        if (!config_path.empty()) ex::merge_config(config, ex::load_config_file(config_path));
        for (const auto& [key, value] : dotted_overrides(app.remaining()))
            ex::apply_override(config, key, value);
        if (*seed_opt) config["sim"]["seed"] = seed;
        if (*shards_opt) config["sim"]["shards"] = shards;
        if (*out_opt) config["output"]["path"] = out_path;
        if (*format_opt) config["output"]["format"] = format;
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ex::kConfigError;
    }
    return ex::run(command, std::move(config), std::cout, std::cerr);
}
