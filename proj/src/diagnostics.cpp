#include "stablemc/diagnostics.hpp"

#include <vector>

#include "stablemc/errors.hpp"
#include "stablemc/parallel.hpp"
#include "stablemc/stats.hpp"

namespace stablemc {

DiagnosticReport diagnose_stable_convergence(const Scenario& scenario, std::uint32_t n,
                                             std::uint64_t reps,
                                             std::span<const ConditioningEvent> events,
                                             double alpha, const RunOptions& opts) {
    if (events.empty()) {
        throw ValidationError("diagnose_stable_convergence: need at least one event");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("diagnose_stable_convergence: alpha must lie in (0,1)");
    }

    // Collected per replicate index so results do not depend on scheduling.
    std::vector<double> observed(reps);
    std::vector<double> kernel_draws(reps);
    std::vector<std::uint8_t> masks(reps * events.size());

    parallel_for(reps, opts.workers, [&](std::uint64_t rep) {
        ScenarioInstance inst = scenario.make_instance(rep);
        for (std::size_t vi = 0; vi < events.size(); ++vi) {
            masks[rep * events.size() + vi] = events[vi].contains(inst.mix) ? 1 : 0;
        }
        observed[rep] = inst.trajectory->observe(inst.times.time_at(n));
        kernel_draws[rep] = scenario.kernel().draw(inst.mix, inst.kernel_stream);
    });

    DiagnosticReport report;
    report.n = n;
    report.replications = reps;
    report.alpha = alpha;
    report.overall_pass = true;
    for (std::size_t vi = 0; vi < events.size(); ++vi) {
        std::vector<double> x_sample;
        std::vector<double> k_sample;
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            if (masks[rep * events.size() + vi]) {
                x_sample.push_back(observed[rep]);
                k_sample.push_back(kernel_draws[rep]);
            }
        }
        if (x_sample.size() < opts.min_event_count) {
            throw InsufficientConditioningMass(events[vi].label, x_sample.size(),
                                               opts.min_event_count);
        }
        EventDiagnostic ed;
        ed.event = events[vi].label;
        ed.sample_size = x_sample.size();
        ed.ks_statistic = ks_two_sample(x_sample, k_sample);
        ed.p_value = kolmogorov_pvalue(ed.ks_statistic, x_sample.size(), k_sample.size());
        ed.pass = ed.p_value >= alpha;
        if (!ed.pass) report.overall_pass = false;
        report.events.push_back(std::move(ed));
    }
    return report;
}

DiagnosticReport diagnose_distributional(const Scenario& scenario, std::uint32_t n,
                                         std::uint64_t reps, double alpha,
                                         const RunOptions& opts) {
    const ConditioningEvent omega = whole_space_event();
    return diagnose_stable_convergence(scenario, n, reps, std::span(&omega, 1), alpha, opts);
}

}  // namespace stablemc
