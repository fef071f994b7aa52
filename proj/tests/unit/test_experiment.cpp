#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "enmod/experiment.hpp"
#include "enmod/rates.hpp"

using namespace enmod;
using namespace enmod::experiment;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cmd(const std::string& command, const json& config) {
    std::ostringstream out, err;
    const int code = run(command, config, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("enmod_unit_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Data lines only, without the comment header.
std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream is(csv);
    for (std::string line; std::getline(is, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

json design_doc(const json& patch) {
    const auto r = run_cmd("design", patch);
    REQUIRE(r.code == kSuccess);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("config parsing and validation") {
    json base = default_config();
    CHECK(base["design"]["L"] == 4);
    CHECK(base["channel"]["kind"] == "rician");

    CHECK_THROWS_AS(merge_config(base, json{{"design", {{"Lx", 3}}}}), ConfigError);
    CHECK_THROWS_AS(merge_config(base, json{{"bogus", 1}}), ConfigError);
    try {
        parse_config_text("{\n  \"design\": {\"L\": 4,,}\n}");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config_file((scratch() / "missing.json").string()), ConfigError);

    CHECK(run_cmd("design", json{{"design", {{"L", 1}}}}).code == kConfigError);
    CHECK(run_cmd("design", json{{"design", {{"method", "nope"}}}}).code == kConfigError);
    CHECK(run_cmd("simulate", json{{"sim", {{"symbols", 10}}}}).code == kConfigError);
    CHECK(run_cmd("design", json{{"design", {{"method", "robust"}}}}).code == kConfigError);
    CHECK(run_cmd("simulate", json{{"design", {{"L", 6}}}, {"sim", {{"scheme", "pam"}}}}).code == kConfigError);
    CHECK(run_cmd("frobnicate", json::object()).code == kConfigError);
    CHECK(run_cmd("design", json{{"unknown", true}}).code == kConfigError);
}

TEST_CASE("overrides") {
    json cfg = default_config();
    apply_override(cfg, "channel.K_dB", "3");
    apply_override(cfg, "design.L", "8");
    apply_override(cfg, "design.L", "16");
    apply_override(cfg, "design.method", "moments");
    apply_override(cfg, "sim.n", "[10,20]");
    CHECK(cfg["channel"]["K_dB"] == 3);
    CHECK(cfg["design"]["L"] == 16);
    CHECK(cfg["design"]["method"] == "moments");
    CHECK(cfg["sim"]["n"] == json::array({10, 20}));
    CHECK_THROWS_AS(apply_override(cfg, "design.nothing", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nothing", "1"), ConfigError);

    const auto typed = interpret(cfg);
    CHECK(typed.channel.k_db == 3.0);
    CHECK(typed.design.levels == 16);

    apply_override(cfg, "channel.K_dB", "\"-inf\"");
    CHECK(std::isinf(interpret(cfg).channel.k_db));
}

TEST_CASE("config hash") {
    json a = default_config();
    json b = default_config();
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    apply_override(b, "sim.seed", "2");
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("design artifacts") {
    SUBCASE("exact with two levels") {
        const auto doc = design_doc(json{{"design", {{"L", 2}}}});
        CHECK(doc["status"] == "feasible");
        CHECK(doc["levels"][0].get<double>() == 0.0);
        CHECK(std::abs(doc["levels"][1].get<double>() - 2.0) < 2e-6);
    }
    SUBCASE("minimum distance") {
        const auto doc = design_doc(json{{"design", {{"L", 4}, {"method", "mindist"}}}});
        const std::vector<double> expect{0.0, 2.0 / 3, 4.0 / 3, 2.0};
        for (std::size_t k = 0; k < 4; ++k) CHECK(doc["levels"][k].get<double>() == doctest::Approx(expect[k]));
    }
    SUBCASE("round trip is bit-exact") {
        for (const char* method : {"exact", "moments", "mindist", "ask"}) {
            json patch{{"design", {{"L", 8}, {"method", method}}}, {"channel", {{"K_dB", 0}, {"gamma_dB", 5}}}};
            const auto doc = design_doc(patch);
            const auto art = artifact_from_json(doc);
            const auto again = artifact_to_json(art, doc["config"]);
            CHECK(again.dump() == doc.dump());
            const auto lv = art.constellation.levels();
            for (std::size_t k = 0; k < lv.size(); ++k) CHECK(lv[k] == doc["levels"][k].get<double>());
        }
    }
    SUBCASE("robust design with two decades of noise uncertainty is infeasible") {
        json patch{{"design",
                    {{"method", "robust"},
                     {"L", 2},
                     {"alpha1_min", 1.0},
                     {"alpha1_max", 1.0},
                     {"sigma2_min", 0.1},
                     {"sigma2_max", 10.0}}}};
        const auto r = run_cmd("design", patch);
        CHECK(r.code == kInfeasible);
        const auto doc = json::parse(r.out);
        CHECK(doc["status"] == "infeasible");
        CHECK(doc["feasible"] == false);
        CHECK_FALSE(r.err.empty());
    }
    SUBCASE("robust around a nominal point") {
        json patch{{"channel", {{"K_dB", -10}, {"gamma_dB", 10}}}, {"design", {{"method", "robust"}, {"a_dB", 2}, {"L", 4}}}};
        const auto doc = design_doc(patch);
        CHECK(doc["feasible"] == true);
        CHECK(doc["t_star"].get<double>() > 0.0);
    }
}

TEST_CASE("evaluate matches the design exponent") {
    const fs::path art = scratch() / "eval_design.json";
    json patch{{"design", {{"L", 4}}}, {"output", {{"path", art.string()}}}};
    REQUIRE(run_cmd("design", patch).code == kSuccess);
    const auto doc = json::parse(slurp(art));
    const double t_star = doc["t_star"].get<double>();

    json eval{{"design", {{"artifact", art.string()}}}, {"sim", {{"n", {1, 10, 50, 100}}}}, {"output", {{"format", "json"}}}};
    const auto r = run_cmd("evaluate", eval);
    REQUIRE(r.code == kSuccess);
    const auto table = json::parse(r.out);
    REQUIRE(table.contains("config"));
    REQUIRE(table["rows"].size() == 4);
    double prev = 2.0;
    for (const auto& row : table["rows"]) {
        const double n = row["n"].get<double>();
        const double bound = row["chernoff_bound"].get<double>();
        CHECK(std::abs(row["I_e"].get<double>() - t_star) < 1e-8);
        CHECK(bound <= prev);
        CHECK(bound == doctest::Approx(1.5 * std::exp(-n * t_star)).epsilon(1e-6));
        prev = bound;
    }

    json missing{{"design", {{"artifact", (scratch() / "none.json").string()}}}};
    CHECK(run_cmd("evaluate", missing).code == kConfigError);
}

TEST_CASE("tables are reproducible") {
    json patch{{"design", {{"L", 4}}}, {"sim", {{"n", {40}}, {"symbols", 5000}, {"seed", 11}}}};
    const auto a = run_cmd("simulate", patch);
    const auto b = run_cmd("simulate", patch);
    REQUIRE(a.code == kSuccess);
    CHECK(a.out == b.out);
    patch["sim"]["shards"] = 4;
    const auto c = run_cmd("simulate", patch);
    REQUIRE(c.code == kSuccess);
    CHECK(data_lines(a.out) == data_lines(c.out));
    CHECK(a.out.find("shards=4") == std::string::npos);
    CHECK(c.out.find("shards=4") != std::string::npos);

    patch["sim"]["seed"] = 12;
    CHECK(run_cmd("simulate", patch).out != a.out);
}

TEST_CASE("csv and json layout") {
    json patch{{"design", {{"L", 2}}}, {"sim", {{"n", {10, 20}}, {"symbols", 2000}}}};
    const auto csv = run_cmd("sweep-n", patch);
    REQUIRE(csv.code == kSuccess);
    CHECK(csv.out.rfind("# enmod sweep-n", 0) == 0);
    CHECK(csv.out.find("config_hash=") != std::string::npos);
    const auto lines = data_lines(csv.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "n,SER,BER,CI_low,CI_high,symbols,seed");
    CHECK(lines[1].rfind("10,", 0) == 0);

    patch["output"] = {{"format", "json"}};
    const auto js = run_cmd("sweep-n", patch);
    const auto doc = json::parse(js.out);
    CHECK(doc.contains("config"));
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["rows"][1]["n"] == 20);

    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(format_number(std::exp(-7.3))) == std::exp(-7.3));
}

TEST_CASE("min-antennas reports NOT_REACHED with success") {
    json patch{{"design", {{"L", 2}}},
               {"sim", {{"scheme", "pam"}, {"T_l", 0}, {"n_max", 64}, {"symbols", 1000}, {"symbol_cap", 20000}}}};
    const auto r = run_cmd("min-antennas", patch);
    CHECK(r.code == kSuccess);
    CHECK(r.out.find("NOT_REACHED") != std::string::npos);

    patch["sim"]["scheme"] = "energy";
    patch["sim"]["target_ber"] = 0.5;
    const auto e = run_cmd("min-antennas", patch);
    REQUIRE(e.code == kSuccess);
    const auto lines = data_lines(e.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].substr(lines[1].rfind(',') + 1) == "1");
}

TEST_CASE("histogram table") {
    json patch{{"design", {{"L", 2}}}, {"sim", {{"n", {20}}, {"trials", 500}, {"bins", 10}}}, {"output", {{"format", "json"}}}};
    const auto r = run_cmd("histogram", patch);
    REQUIRE(r.code == kSuccess);
    const auto doc = json::parse(r.out);
    std::int64_t counted = 0;
    bool overlap = false;
    for (const auto& row : doc["rows"]) {
        if (row["kind"] == "bin") counted += row["count"].get<std::int64_t>();
        if (row["kind"] == "overlap") overlap = true;
    }
    CHECK(counted == 1000);
    CHECK(overlap);
}

TEST_CASE("nakagami channels simulate") {
    json patch{{"channel", {{"kind", "nakagami"}, {"m", 2}}}, {"sim", {{"symbols", 1000}, {"n", {4}}}}};
    CHECK(run_cmd("simulate", patch).code == kSuccess);
}
