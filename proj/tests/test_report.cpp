#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stablemc/errors.hpp"
#include "stablemc/kernels.hpp"
#include "stablemc/runner.hpp"

using namespace stablemc;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("stablemc_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

const char* kSmallConfig = R"({
  "scenario": {"name": "exchangeable_clt", "u_law": {"type": "lognormal", "mu": 0.0, "sigma": 0.5}},
  "master_seed": 7,
  "probe": {"n_values": [50, 100], "delta_values": [0.4, 0.2], "epsilon_values": [0.5, 0.25],
            "replications": 200, "variants": ["c", "d", "e"]},
  "diagnostics": {"n": 200, "reps": 900, "alpha": 0.01, "events": "quartiles"},
  "output_dir": "unused",
  "min_event_count": 150
})";

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
    const RunConfig cfg = parse_config(R"({"scenario": "exchangeable_clt", "master_seed": 1})");
    CHECK(cfg.master_seed == 1);
    CHECK(cfg.scenario.name == "exchangeable_clt");
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.workers == 0);
    CHECK(cfg.max_horizon == kDefaultMaxHorizon);
    CHECK(cfg.min_event_count == 200);
    CHECK_FALSE(cfg.probe.has_value());
    CHECK_FALSE(cfg.diagnostics.has_value());
    CHECK_FALSE(cfg.dump_paths);
    // Effective grid falls back to the scenario default.
    CHECK(cfg.effective_grid().n_values == default_probe_grid("exchangeable_clt").n_values);
}

TEST_CASE("config validation failures name the offence") {
    CHECK_THROWS_AS(parse_config("{nonsense"), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"master_seed": 1})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "bogus", "master_seed": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "exchangeable_clt", "oops": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_config(R"({"scenario": {"name": "exchangeable_clt", "w_law": {"type":"uniform"}}})"),
        ValidationError);

    try {
        parse_config(
            R"({"scenario": "exchangeable_clt", "probe": {"delta_values": [1.5]}})");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("delta must lie in (0,1]") != std::string::npos);
    }
}

TEST_CASE("scenario parameter parsing round-trips through the echo") {
    const RunConfig cfg = parse_config(kSmallConfig);
    CHECK(cfg.probe->n_values == std::vector<std::uint32_t>{50, 100});
    CHECK(cfg.probe_variants.size() == 3);
    CHECK(cfg.diagnostics->reps == 900);
    const nlohmann::json echo = config_to_json(cfg);
    CHECK(echo.at("scenario").at("u_law").at("sigma") == 0.5);
    CHECK(echo.at("probe").at("replications") == 200);
}

TEST_CASE("run_experiment produces a full deterministic report") {
    RunConfig cfg = parse_config(kSmallConfig);
    cfg.workers = 1;
    const RunReport a = run_experiment(cfg);
    REQUIRE(a.stage_errors.empty());
    REQUIRE(a.probes.size() == 3);
    REQUIRE(a.equivalence.has_value());
    REQUIRE(a.diagnostics.size() == 1);
    CHECK(a.diagnostics[0].overall_pass);
    CHECK_FALSE(a.any_fail);

    // Identical bytes on a re-run with the same config and seed.
    const RunReport b = run_experiment(cfg);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());

    // Worker count must not change any number.
    cfg.workers = 4;
    const RunReport c = run_experiment(cfg);
    CHECK(report_to_json(a).dump() == report_to_json(c).dump());
}

TEST_CASE("report JSON round-trips and CSV rows match the grid size") {
    RunConfig cfg = parse_config(kSmallConfig);
    cfg.workers = 2;
    const RunReport report = run_experiment(cfg);
    const nlohmann::json j = report_to_json(report);
    const RunReport parsed = report_from_json(j);
    CHECK(report_to_json(parsed).dump() == j.dump());

    const auto dir = temp_dir("roundtrip");
    write_report(report, dir);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "manifest.json"));

    const nlohmann::json from_disk = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report_to_json(report_from_json(from_disk)).dump() == from_disk.dump());

    // CSV rows = |n| * |delta| * |epsilon| * |events| (+ header).
    for (const char* variant : {"c", "d", "e"}) {
        const std::string csv = slurp(dir / "tables" / (std::string("probe_") + variant + ".csv"));
        const std::size_t rows = static_cast<std::size_t>(
            std::count(csv.begin(), csv.end(), '\n'));
        CHECK(rows == 1 + 2 * 2 * 2 * 1);
    }
    const std::string diag_csv = slurp(dir / "tables" / "diagnostics.csv");
    CHECK(static_cast<std::size_t>(std::count(diag_csv.begin(), diag_csv.end(), '\n')) ==
          1 + 4);

    // The manifest echoes the config and seed.
    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("master_seed") == 7);
    CHECK(manifest.at("config").at("scenario").at("name") == "exchangeable_clt");
    std::filesystem::remove_all(dir);
}

TEST_CASE("every CSV number appears in report.json") {
    RunConfig cfg = parse_config(kSmallConfig);
    cfg.probe_variants = {ConditionVariant::c};
    const RunReport report = run_experiment(cfg, kRunProbes);
    const auto dir = temp_dir("superset");
    write_report(report, dir);
    const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));

    const auto& cells = j.at("probes").at(0).at("cells");
    std::string csv = slurp(dir / "tables" / "probe_c.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    std::size_t idx = 0;
    while (std::getline(lines, line)) {
        const auto& cell = cells.at(idx++);
        std::istringstream fields(line);
        std::string n, delta, eps, event, p_hat, se, limsup;
        std::getline(fields, n, ',');
        std::getline(fields, delta, ',');
        std::getline(fields, eps, ',');
        std::getline(fields, event, ',');
        std::getline(fields, p_hat, ',');
        std::getline(fields, se, ',');
        std::getline(fields, limsup, ',');
        CHECK(cell.at("n").get<std::uint64_t>() == std::stoull(n));
        CHECK(cell.at("delta").get<double>() == std::stod(delta));
        CHECK(cell.at("epsilon").get<double>() == std::stod(eps));
        CHECK(cell.at("event").get<std::string>() == event);
        CHECK(cell.at("p_hat").get<double>() == std::stod(p_hat));
        CHECK(cell.at("se").get<double>() == std::stod(se));
    }
    CHECK(idx == cells.size());
    std::filesystem::remove_all(dir);
}

TEST_CASE("write_report handles a report with no tables") {
    RunReport report;
    report.master_seed = 1;
    report.config_echo = nlohmann::json{{"scenario", {{"name", "exchangeable_clt"}}}};
    const auto dir = temp_dir("empty");
    write_report(report, dir);
    const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j.at("probes").is_array());
    CHECK(j.at("probes").empty());
    CHECK(j.at("equivalence").is_null());
    CHECK(report_to_json(report_from_json(j)).dump() == j.dump());
    std::filesystem::remove_all(dir);
}

TEST_CASE("counterexample run: fail verdict next to a bounded condition-c curve") {
    RunConfig cfg = parse_config(R"({
      "scenario": "moving_indicator",
      "master_seed": 17,
      "probe": {"n_values": [1000, 2000], "delta_values": [0.2, 0.1],
                "epsilon_values": [0.5], "replications": 1000, "variants": ["c"]},
      "diagnostics": {"n": 20, "reps": 1000, "alpha": 0.01, "events": "quartiles"}
    })");
    // d/e probes at these n would overrun the horizon by construction
    // (N_n = U e^n), so the run covers the c-probe and diagnostics stages.
    const RunReport report = run_experiment(cfg, kRunProbes | kRunDiagnostics);
    REQUIRE(report.stage_errors.empty());
    CHECK(report.any_fail);
    REQUIRE(report.diagnostics.size() == 1);
    CHECK_FALSE(report.diagnostics[0].overall_pass);
    for (const auto& cell : report.probes.at(0).cells) {
        const double bound = std::log((1.0 + cell.delta) / (1.0 - cell.delta));
        CHECK(cell.p_hat <= bound + 3.0 * std::max(cell.se, 1e-3));
    }
}

TEST_CASE("kernel backends produce identical experiment reports") {
    RunConfig cfg = parse_config(kSmallConfig);
    const auto original = kernels::active_backend();
    std::vector<std::string> dumps;
    for (const auto backend : kernels::available_backends()) {
        kernels::force_backend(backend);
        dumps.push_back(report_to_json(run_experiment(cfg)).dump());
    }
    kernels::force_backend(original);
    for (std::size_t i = 1; i < dumps.size(); ++i) {
        CHECK(dumps[i] == dumps[0]);
    }
}

TEST_CASE("stage errors keep partial results and are reported") {
    RunConfig cfg = parse_config(kSmallConfig);
    cfg.max_horizon = 64;  // forces HorizonExceeded inside the probes
    const RunReport report = run_experiment(cfg, kRunProbes | kRunEquivalence);
    CHECK_FALSE(report.stage_errors.empty());
    for (const auto& e : report.stage_errors) {
        CHECK(e.message.find("horizon exceeded") != std::string::npos);
    }
}
