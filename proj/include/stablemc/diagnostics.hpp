#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stablemc/scenario.hpp"

namespace stablemc {

struct EventDiagnostic {
    std::string event;
    std::uint64_t sample_size = 0;  // per side; one kernel draw per retained replicate
    double ks_statistic = 0.0;
    double p_value = 0.0;
    bool pass = false;
};

struct DiagnosticReport {
    std::uint32_t n = 0;
    std::uint64_t replications = 0;
    double alpha = 0.01;
    std::vector<EventDiagnostic> events;
    bool overall_pass = false;  // all events pass
};

// Empirical stable-convergence check: for every event H, the law of the
// functional of X_{N_n} over replicates in H is compared against kernel draws
// from the same replicates by a two-sample KS test at level alpha. Throws
// InsufficientConditioningMass when an event retains fewer than
// opts.min_event_count replicates.
DiagnosticReport diagnose_stable_convergence(const Scenario& scenario, std::uint32_t n,
                                             std::uint64_t reps,
                                             std::span<const ConditioningEvent> events,
                                             double alpha, const RunOptions& opts = {});

// Same check with the single event "everything": plain convergence in
// distribution.
DiagnosticReport diagnose_distributional(const Scenario& scenario, std::uint32_t n,
                                         std::uint64_t reps, double alpha,
                                         const RunOptions& opts = {});

}  // namespace stablemc
