#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stablemc/errors.hpp"
#include "stablemc/kernels.hpp"
#include "stablemc/runner.hpp"

namespace {

using namespace stablemc;

struct CommonArgs {
    std::string config_path;
    std::int64_t seed = -1;
    std::int64_t workers = -1;
    std::string out_dir;
    bool dump_paths = false;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path, "JSON experiment config")->required();
    cmd->add_option("--seed", args->seed, "override master_seed");
    cmd->add_option("--workers", args->workers, "override worker count");
    cmd->add_option("--out", args->out_dir, "override output directory");
    cmd->add_flag("--dump-paths", args->dump_paths, "dump per-replicate path CSVs");
}

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = parse_config_file(args.config_path);
    if (args.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(args.seed);
    if (args.workers >= 0) cfg.workers = static_cast<unsigned>(args.workers);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.dump_paths) cfg.dump_paths = true;
    return cfg;
}

DiagnosticsConfig default_diagnostics(const std::string& scenario_name) {
    DiagnosticsConfig d;
    if (scenario_name == "moving_indicator") {
        d.n = 20;
        d.reps = 10000;
    } else if (scenario_name == "hitting_midpoint") {
        d.n = 10;
        d.reps = 4000;
    } else if (scenario_name == "exchangeable_clt") {
        d.n = 10000;
        d.reps = 4000;
    } else {
        d.n = 2000;
        d.reps = 3000;
    }
    return d;
}

void print_probe_summary(const RunReport& report) {
    for (const auto& probe : report.probes) {
        std::cout << "probe variant " << variant_name(probe.variant) << " ("
                  << probe.grid.replications << " replicates)\n";
        std::cout << "  n delta epsilon event p_hat se\n";
        for (const auto& c : probe.cells) {
            std::cout << "  " << c.n << " " << c.delta << " " << c.epsilon << " " << c.event
                      << " " << c.p_hat << " " << c.se << "\n";
        }
    }
}

void print_equivalence_summary(const RunReport& report) {
    if (!report.equivalence.has_value()) return;
    std::cout << "d/e equivalence (" << report.equivalence->grid.replications
              << " replicates)\n  n delta epsilon p_d p_e |diff| 3se flag\n";
    for (const auto& r : report.equivalence->rows) {
        std::cout << "  " << r.n << " " << r.delta << " " << r.epsilon << " " << r.p_d << " "
                  << r.p_e << " " << r.abs_diff << " " << r.joint_3se << " "
                  << (r.flagged ? "FLAG" : "ok") << "\n";
    }
}

void print_diagnostics_summary(const RunReport& report) {
    for (const auto& d : report.diagnostics) {
        std::cout << "stable-convergence diagnostic at n=" << d.n << ", alpha=" << d.alpha
                  << "\n";
        for (const auto& e : d.events) {
            std::cout << "  event " << e.event << ": ks=" << e.ks_statistic
                      << " p=" << e.p_value << " -> " << (e.pass ? "pass" : "FAIL") << "\n";
        }
        std::cout << "  overall: " << (d.overall_pass ? "pass" : "FAIL") << "\n";
    }
}

void dump_diagnostic_paths(const RunConfig& cfg, const std::filesystem::path& dir) {
    const auto scenario = make_scenario(cfg.scenario, cfg.master_seed, cfg.max_horizon);
    const DiagnosticsConfig d =
        cfg.diagnostics.has_value() ? *cfg.diagnostics : default_diagnostics(cfg.scenario.name);
    std::filesystem::create_directories(dir / "paths");
    for (std::uint64_t rep = 0; rep < d.reps; ++rep) {
        ScenarioInstance inst = scenario->make_instance(rep);
        auto* paths = dynamic_cast<PathTrajectory*>(inst.trajectory.get());
        if (paths == nullptr) return;  // only path scenarios have dumpable paths
        const StepFunction x = paths->path_at(inst.times.time_at(d.n));
        std::ofstream out(dir / "paths" / ("rep_" + std::to_string(rep) + ".csv"));
        out << "t,value\n";
        out << "0," << x.initial_value() << "\n";
        for (std::size_t i = 0; i < x.node_count(); ++i) {
            out << x.jump_times()[i] << "," << x.values()[i] << "\n";
        }
    }
}

int finish(const RunConfig& cfg, RunReport& report) {
    write_report(report, cfg.output_dir);
    for (const auto& e : report.stage_errors) {
        std::cerr << "stage " << e.stage << " failed: " << e.message << "\n";
    }
    std::cerr << "wall time: " << report.wall_seconds << " s; report written to "
              << cfg.output_dir << "\n";
    if (!report.stage_errors.empty()) return 1;
    return report.any_fail ? 2 : 0;
}

int cmd_probe(const CommonArgs& args) {
    RunConfig cfg = load_config(args);
    RunReport report = run_experiment(cfg, kRunProbes);
    print_probe_summary(report);
    return finish(cfg, report);
}

int cmd_equivalence(const CommonArgs& args) {
    RunConfig cfg = load_config(args);
    RunReport report = run_experiment(cfg, kRunEquivalence);
    print_equivalence_summary(report);
    return finish(cfg, report);
}

int cmd_diagnose(const CommonArgs& args) {
    RunConfig cfg = load_config(args);
    if (!cfg.diagnostics.has_value()) {
        cfg.diagnostics = default_diagnostics(cfg.scenario.name);
    }
    RunReport report = run_experiment(cfg, kRunDiagnostics);
    print_diagnostics_summary(report);
    if (cfg.dump_paths) {
        dump_diagnostic_paths(cfg, cfg.output_dir);
    }
    return finish(cfg, report);
}

int cmd_scenario_dump(const CommonArgs& args, std::uint64_t replicates, std::uint64_t max_index) {
    RunConfig cfg = load_config(args);
    const auto scenario = make_scenario(cfg.scenario, cfg.master_seed, cfg.max_horizon);
    const std::filesystem::path dir = cfg.output_dir;
    std::filesystem::create_directories(dir);

    nlohmann::json mixing = nlohmann::json::array();
    for (std::uint64_t rep = 0; rep < replicates; ++rep) {
        ScenarioInstance inst = scenario->make_instance(rep);
        nlohmann::json m{{"replicate", rep}};
        if (!std::isnan(inst.mix.u)) m["u"] = inst.mix.u;
        if (!std::isnan(inst.mix.u_eff)) m["u_eff"] = inst.mix.u_eff;
        if (!std::isnan(inst.mix.omega)) m["omega"] = inst.mix.omega;
        if (!std::isnan(inst.mix.w)) m["w"] = inst.mix.w;
        mixing.push_back(m);

        std::ofstream times(dir / ("times_rep_" + std::to_string(rep) + ".csv"));
        times << "n,N_n,k_n,scaled\n";
        for (std::uint32_t n = 0; n <= 20; ++n) {
            times << n << "," << inst.times.time_at(n) << "," << inst.times.scaling(n) << ","
                  << inst.times.scaled_time(n) << "\n";
        }

        if (auto* paths = dynamic_cast<PathTrajectory*>(inst.trajectory.get())) {
            const StepFunction x = paths->path_at(max_index);
            std::ofstream out(dir / ("path_rep_" + std::to_string(rep) + ".csv"));
            out << "t,value\n";
            out << "0," << x.initial_value() << "\n";
            for (std::size_t i = 0; i < x.node_count(); ++i) {
                out << x.jump_times()[i] << "," << x.values()[i] << "\n";
            }
        } else {
            std::ofstream out(dir / ("trajectory_rep_" + std::to_string(rep) + ".csv"));
            out << "j,value\n";
            for (std::uint64_t j = 0; j <= max_index; ++j) {
                out << j << "," << inst.trajectory->observe(j) << "\n";
            }
        }
    }
    std::ofstream mix_out(dir / "mixing.json");
    mix_out << mixing.dump(2) << "\n";
    std::cerr << "scenario dump written to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "stablemc: Monte Carlo laboratory for stable convergence of randomly indexed "
        "sequences.\n"
        "Scenarios: moving_indicator, hitting_midpoint, exchangeable_clt, "
        "exchangeable_empirical.\n"
        "Config defaults: master_seed=1, workers=auto, max_horizon=2^22, "
        "min_event_count=200,\n"
        "probe grid and diagnostics (n, reps, alpha=0.01, events=quartiles) default per "
        "scenario."};
    app.require_subcommand(1);

    CommonArgs probe_args, diag_args, equiv_args, dump_args;
    std::uint64_t dump_replicates = 3;
    std::uint64_t dump_max_index = 100;

    auto* probe = app.add_subcommand("probe", "estimate the window-oscillation conditions");
    add_common(probe, &probe_args);
    auto* diagnose =
        app.add_subcommand("diagnose", "two-sample stable-convergence diagnostics");
    add_common(diagnose, &diag_args);
    auto* equivalence = app.add_subcommand(
        "equivalence", "compare random-time and scaled-center condition estimates");
    add_common(equivalence, &equiv_args);
    auto* dump = app.add_subcommand("scenario-dump", "dump trajectory/path samples");
    add_common(dump, &dump_args);
    dump->add_option("--replicates", dump_replicates, "replicates to dump (default 3)");
    dump->add_option("--max-index", dump_max_index, "largest trajectory index (default 100)");

    try {
        app.parse(argc, argv);
        std::cerr << "kernel backend: " << kernels::active().name << "\n";
        if (probe->parsed()) return cmd_probe(probe_args);
        if (diagnose->parsed()) return cmd_diagnose(diag_args);
        if (equivalence->parsed()) return cmd_equivalence(equiv_args);
        if (dump->parsed()) return cmd_scenario_dump(dump_args, dump_replicates, dump_max_index);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const stablemc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
