#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stablemc/scenario.hpp"
#include "stablemc/trajectory.hpp"

namespace stablemc {

struct ProbeGrid {
    std::vector<std::uint32_t> n_values;   // increasing, positive
    std::vector<double> delta_values;      // decreasing, in (0,1]
    std::vector<double> epsilon_values;    // positive
    std::uint64_t replications = 1000;

    void validate() const;  // throws ValidationError
};

enum class ConditionVariant { c, c_star, d, e };

std::string variant_name(ConditionVariant v);
ConditionVariant variant_from_name(const std::string& name);

struct ConditionCell {
    std::uint32_t n = 0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::string event;
    std::uint64_t event_count = 0;
    std::uint64_t exceed_count = 0;
    double p_hat = 0.0;
    double se = 0.0;
};

struct LimsupRow {
    double delta = 0.0;
    double epsilon = 0.0;
    std::string event;
    double limsup_proxy = 0.0;  // max p_hat over the two largest n values
};

struct ConditionEstimate {
    ConditionVariant variant = ConditionVariant::c;
    ProbeGrid grid;
    std::vector<ConditionCell> cells;  // n-major, then delta, epsilon, event
    std::vector<LimsupRow> limsup;

    const ConditionCell& cell(std::uint32_t n, double delta, double epsilon,
                              const std::string& event = "all") const;
};

// Monte Carlo estimate of P(M(delta) > epsilon) over the grid, with the
// window center chosen by the variant: c uses n itself, d uses N_n, e uses
// floor(k_n * U). Variant c_star estimates conditionally on every supplied
// event and requires each event to retain at least min_event_count
// replicates. Other variants ignore the event list.
ConditionEstimate estimate_condition(const Scenario& scenario, const ProbeGrid& grid,
                                     ConditionVariant variant,
                                     std::span<const ConditioningEvent> events = {},
                                     const RunOptions& opts = {});

struct EquivalenceRow {
    std::uint32_t n = 0;
    double delta = 0.0;
    double epsilon = 0.0;
    double p_d = 0.0;
    double p_e = 0.0;
    double abs_diff = 0.0;
    double joint_3se = 0.0;  // 3 * SE of the paired difference
    bool flagged = false;    // abs_diff > joint_3se
};

struct EquivalenceReport {
    ProbeGrid grid;
    std::vector<EquivalenceRow> rows;
    bool any_flagged = false;
};

// Runs the random-time and scaled-center probes on the same replicates and
// draws, so identical centers give identically zero discrepancy.
EquivalenceReport equivalence_report(const Scenario& scenario, const ProbeGrid& grid,
                                     const RunOptions& opts = {});

// Contract-level wrappers around window_max.
double window_max_at_random_time(Trajectory& t, const RandomTimeSequence& times, std::uint32_t n,
                                 double delta, std::uint64_t replicate_id = 0);
double window_max_at_scaled(Trajectory& t, double u, double k_n, double delta,
                            std::uint64_t replicate_id = 0, std::uint64_t n = 0);

}  // namespace stablemc
