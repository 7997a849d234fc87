#include "stablemc/runner.hpp"

#include <chrono>

#include "stablemc/errors.hpp"

namespace stablemc {

RunReport run_experiment(const RunConfig& cfg, unsigned selection) {
    const auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.master_seed = cfg.master_seed;
    report.config_echo = config_to_json(cfg);

    const auto scenario = make_scenario(cfg.scenario, cfg.master_seed, cfg.max_horizon);
    const RunOptions opts = cfg.run_options();

    if (selection & kRunProbes) {
        const ProbeGrid grid = cfg.effective_grid();
        for (const ConditionVariant variant : cfg.probe_variants) {
            try {
                std::vector<ConditioningEvent> events;
                if (variant == ConditionVariant::c_star) {
                    events = scenario->quartile_events();
                }
                report.probes.push_back(
                    estimate_condition(*scenario, grid, variant, events, opts));
                report.total_replicates += grid.replications;
            } catch (const Error& e) {
                report.stage_errors.push_back({"probe_" + variant_name(variant), e.what()});
            }
        }
    }

    if (selection & kRunEquivalence) {
        const ProbeGrid grid = cfg.effective_grid();
        try {
            report.equivalence = equivalence_report(*scenario, grid, opts);
            report.total_replicates += grid.replications;
            if (report.equivalence->any_flagged) report.any_fail = true;
        } catch (const Error& e) {
            report.stage_errors.push_back({"equivalence", e.what()});
        }
    }

    if ((selection & kRunDiagnostics) && cfg.diagnostics.has_value()) {
        const DiagnosticsConfig& d = *cfg.diagnostics;
        try {
            const std::vector<ConditioningEvent> events = d.events.build(*scenario);
            report.diagnostics.push_back(
                diagnose_stable_convergence(*scenario, d.n, d.reps, events, d.alpha, opts));
            report.total_replicates += d.reps;
            if (!report.diagnostics.back().overall_pass) report.any_fail = true;
        } catch (const Error& e) {
            report.stage_errors.push_back({"diagnostics", e.what()});
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace stablemc
