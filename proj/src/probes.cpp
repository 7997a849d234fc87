#include "stablemc/probes.hpp"

#include <atomic>
#include <cmath>
#include <cstring>

#include "stablemc/errors.hpp"
#include "stablemc/kernels.hpp"
#include "stablemc/parallel.hpp"

namespace stablemc {

void ProbeGrid::validate() const {
    if (n_values.empty() || delta_values.empty() || epsilon_values.empty()) {
        throw ValidationError("probe grid: n, delta and epsilon lists must be non-empty");
    }
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] == 0 || (i > 0 && n_values[i] <= n_values[i - 1])) {
            throw ValidationError("probe grid: n_values must be positive and increasing");
        }
    }
    for (std::size_t i = 0; i < delta_values.size(); ++i) {
        if (!(delta_values[i] > 0.0 && delta_values[i] <= 1.0)) {
            throw ValidationError("probe grid: delta must lie in (0,1]");
        }
        if (i > 0 && delta_values[i] >= delta_values[i - 1]) {
            throw ValidationError("probe grid: delta_values must be decreasing");
        }
    }
    for (const double e : epsilon_values) {
        if (!(e > 0.0)) {
            throw ValidationError("probe grid: epsilon values must be positive");
        }
    }
    if (replications < 100) {
        throw ValidationError("probe grid: replications must be at least 100");
    }
}

std::string variant_name(ConditionVariant v) {
    switch (v) {
        case ConditionVariant::c:
            return "c";
        case ConditionVariant::c_star:
            return "c_star";
        case ConditionVariant::d:
            return "d";
        case ConditionVariant::e:
            return "e";
    }
    return "?";
}

ConditionVariant variant_from_name(const std::string& name) {
    if (name == "c") return ConditionVariant::c;
    if (name == "c_star") return ConditionVariant::c_star;
    if (name == "d") return ConditionVariant::d;
    if (name == "e") return ConditionVariant::e;
    throw ValidationError("unknown condition variant '" + name + "'");
}

const ConditionCell& ConditionEstimate::cell(std::uint32_t n, double delta, double epsilon,
                                             const std::string& event) const {
    for (const auto& c : cells) {
        if (c.n == n && c.delta == delta && c.epsilon == epsilon && c.event == event) {
            return c;
        }
    }
    throw DomainError("condition estimate: no such cell");
}

namespace {

std::uint64_t center_for(ConditionVariant variant, std::uint32_t n,
                         const ScenarioInstance& inst) {
    switch (variant) {
        case ConditionVariant::c:
        case ConditionVariant::c_star:
            return n;
        case ConditionVariant::d:
            return inst.times.time_at(n);
        case ConditionVariant::e:
            return inst.times.scaled_time(n);
    }
    return n;
}

// Window maxima for every delta at a fixed center. Nested windows share one
// distance profile unless the trajectory has an O(log) shortcut.
void window_maxima(Trajectory& traj, std::uint64_t center, std::span<const double> deltas,
                   std::uint64_t replicate_id, std::uint32_t n, std::vector<double>& out,
                   std::vector<double>& profile) {
    out.resize(deltas.size());
    if (traj.cheap_window_max()) {
        for (std::size_t di = 0; di < deltas.size(); ++di) {
            out[di] = window_max(traj, center, deltas[di], replicate_id, n);
        }
        return;
    }
    const WindowBounds big = window_bounds(center, deltas.front());
    if (big.hi > traj.max_horizon()) {
        throw HorizonExceeded(big.hi, traj.max_horizon(), replicate_id, n);
    }
    const std::size_t len = static_cast<std::size_t>(big.hi - big.lo + 1);
    profile.resize(len);
    traj.distance_profile(big.lo, big.hi, center, profile);
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const WindowBounds b = window_bounds(center, deltas[di]);
        if (b.lo == b.hi) {
            out[di] = 0.0;
            continue;
        }
        out[di] = kernels::active().reduce_max_abs_dev(
            profile.data() + (b.lo - big.lo), static_cast<std::size_t>(b.hi - b.lo + 1), 0.0);
    }
}

}  // namespace

namespace {

// k_n must stay strictly positive and nondecreasing over the requested grid.
void check_scaling(const Scenario& scenario, const ProbeGrid& grid) {
    const ScenarioInstance probe = scenario.make_instance(0);
    double prev = 0.0;
    for (const std::uint32_t n : grid.n_values) {
        const double k = probe.times.scaling(n);
        if (!(k > 0.0)) {
            throw ValidationError("scaling k_n must be strictly positive at n=" +
                                  std::to_string(n));
        }
        if (k < prev) {
            throw ValidationError("scaling k_n must be nondecreasing on the grid (n=" +
                                  std::to_string(n) + ")");
        }
        prev = k;
    }
}

}  // namespace

ConditionEstimate estimate_condition(const Scenario& scenario, const ProbeGrid& grid,
                                     ConditionVariant variant,
                                     std::span<const ConditioningEvent> events,
                                     const RunOptions& opts) {
    grid.validate();
    check_scaling(scenario, grid);
    std::vector<ConditioningEvent> event_list;
    if (variant == ConditionVariant::c_star) {
        if (events.empty()) {
            throw ValidationError("variant c_star needs a non-empty event family");
        }
        event_list.assign(events.begin(), events.end());
    } else {
        event_list.push_back(whole_space_event());
    }

    const std::size_t n_count = grid.n_values.size();
    const std::size_t d_count = grid.delta_values.size();
    const std::size_t e_count = grid.epsilon_values.size();
    const std::size_t ev_count = event_list.size();
    const std::size_t cell_count = n_count * d_count * e_count * ev_count;

    std::vector<std::atomic<std::uint64_t>> exceed(cell_count);
    std::vector<std::atomic<std::uint64_t>> event_totals(ev_count);
    for (auto& a : exceed) a.store(0, std::memory_order_relaxed);
    for (auto& a : event_totals) a.store(0, std::memory_order_relaxed);

    auto cell_index = [&](std::size_t ni, std::size_t di, std::size_t ei, std::size_t vi) {
        return ((ni * d_count + di) * e_count + ei) * ev_count + vi;
    };

    parallel_for(grid.replications, opts.workers, [&](std::uint64_t rep) {
        ScenarioInstance inst = scenario.make_instance(rep);
        std::vector<bool> mask(ev_count);
        for (std::size_t vi = 0; vi < ev_count; ++vi) {
            mask[vi] = event_list[vi].contains(inst.mix);
            if (mask[vi]) event_totals[vi].fetch_add(1, std::memory_order_relaxed);
        }
        std::vector<double> maxima;
        std::vector<double> profile;
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            const std::uint32_t n = grid.n_values[ni];
            const std::uint64_t center = center_for(variant, n, inst);
            window_maxima(*inst.trajectory, center, grid.delta_values, rep, n, maxima, profile);
            for (std::size_t di = 0; di < d_count; ++di) {
                for (std::size_t ei = 0; ei < e_count; ++ei) {
                    if (maxima[di] > grid.epsilon_values[ei]) {
                        for (std::size_t vi = 0; vi < ev_count; ++vi) {
                            if (mask[vi]) {
                                exceed[cell_index(ni, di, ei, vi)].fetch_add(
                                    1, std::memory_order_relaxed);
                            }
                        }
                    }
                }
            }
        }
    });

    const std::uint64_t min_count =
        variant == ConditionVariant::c_star ? opts.min_event_count : 0;
    for (std::size_t vi = 0; vi < ev_count; ++vi) {
        const std::uint64_t total = event_totals[vi].load();
        if (total < min_count) {
            throw InsufficientConditioningMass(event_list[vi].label, total, min_count);
        }
    }

    ConditionEstimate est;
    est.variant = variant;
    est.grid = grid;
    est.cells.reserve(cell_count);
    for (std::size_t ni = 0; ni < n_count; ++ni) {
        for (std::size_t di = 0; di < d_count; ++di) {
            for (std::size_t ei = 0; ei < e_count; ++ei) {
                for (std::size_t vi = 0; vi < ev_count; ++vi) {
                    ConditionCell cell;
                    cell.n = grid.n_values[ni];
                    cell.delta = grid.delta_values[di];
                    cell.epsilon = grid.epsilon_values[ei];
                    cell.event = event_list[vi].label;
                    cell.event_count = event_totals[vi].load();
                    cell.exceed_count = exceed[cell_index(ni, di, ei, vi)].load();
                    if (cell.event_count > 0) {
                        cell.p_hat = static_cast<double>(cell.exceed_count) /
                                     static_cast<double>(cell.event_count);
                        cell.se = std::sqrt(cell.p_hat * (1.0 - cell.p_hat) /
                                            static_cast<double>(cell.event_count));
                    }
                    est.cells.push_back(std::move(cell));
                }
            }
        }
    }

    // limsup proxy: max p_hat over the two largest n values per (delta,
    // epsilon, event). The full curve stays in the cells for auditing.
    const std::size_t top = n_count >= 2 ? n_count - 2 : 0;
    for (std::size_t di = 0; di < d_count; ++di) {
        for (std::size_t ei = 0; ei < e_count; ++ei) {
            for (std::size_t vi = 0; vi < ev_count; ++vi) {
                LimsupRow row;
                row.delta = grid.delta_values[di];
                row.epsilon = grid.epsilon_values[ei];
                row.event = event_list[vi].label;
                row.limsup_proxy = 0.0;
                for (std::size_t ni = top; ni < n_count; ++ni) {
                    row.limsup_proxy =
                        std::max(row.limsup_proxy,
                                 est.cells[cell_index(ni, di, ei, vi)].p_hat);
                }
                est.limsup.push_back(std::move(row));
            }
        }
    }
    return est;
}

EquivalenceReport equivalence_report(const Scenario& scenario, const ProbeGrid& grid,
                                     const RunOptions& opts) {
    grid.validate();
    check_scaling(scenario, grid);
    const std::size_t n_count = grid.n_values.size();
    const std::size_t d_count = grid.delta_values.size();
    const std::size_t e_count = grid.epsilon_values.size();
    const std::size_t cell_count = n_count * d_count * e_count;

    std::vector<std::atomic<std::uint64_t>> cnt_d(cell_count);
    std::vector<std::atomic<std::uint64_t>> cnt_e(cell_count);
    std::vector<std::atomic<std::uint64_t>> cnt_both(cell_count);
    for (std::size_t i = 0; i < cell_count; ++i) {
        cnt_d[i].store(0, std::memory_order_relaxed);
        cnt_e[i].store(0, std::memory_order_relaxed);
        cnt_both[i].store(0, std::memory_order_relaxed);
    }
    auto cell_index = [&](std::size_t ni, std::size_t di, std::size_t ei) {
        return (ni * d_count + di) * e_count + ei;
    };

    parallel_for(grid.replications, opts.workers, [&](std::uint64_t rep) {
        ScenarioInstance inst = scenario.make_instance(rep);
        std::vector<double> max_d, max_e;
        std::vector<double> profile;
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            const std::uint32_t n = grid.n_values[ni];
            const std::uint64_t center_d = inst.times.time_at(n);
            const std::uint64_t center_e = inst.times.scaled_time(n);
            window_maxima(*inst.trajectory, center_d, grid.delta_values, rep, n, max_d, profile);
            if (center_e == center_d) {
                max_e = max_d;
            } else {
                window_maxima(*inst.trajectory, center_e, grid.delta_values, rep, n, max_e,
                              profile);
            }
            for (std::size_t di = 0; di < d_count; ++di) {
                for (std::size_t ei = 0; ei < e_count; ++ei) {
                    const bool id = max_d[di] > grid.epsilon_values[ei];
                    const bool ie = max_e[di] > grid.epsilon_values[ei];
                    const std::size_t ci = cell_index(ni, di, ei);
                    if (id) cnt_d[ci].fetch_add(1, std::memory_order_relaxed);
                    if (ie) cnt_e[ci].fetch_add(1, std::memory_order_relaxed);
                    if (id && ie) cnt_both[ci].fetch_add(1, std::memory_order_relaxed);
                }
            }
        }
    });

    EquivalenceReport report;
    report.grid = grid;
    const double reps = static_cast<double>(grid.replications);
    for (std::size_t ni = 0; ni < n_count; ++ni) {
        for (std::size_t di = 0; di < d_count; ++di) {
            for (std::size_t ei = 0; ei < e_count; ++ei) {
                const std::size_t ci = cell_index(ni, di, ei);
                EquivalenceRow row;
                row.n = grid.n_values[ni];
                row.delta = grid.delta_values[di];
                row.epsilon = grid.epsilon_values[ei];
                row.p_d = static_cast<double>(cnt_d[ci].load()) / reps;
                row.p_e = static_cast<double>(cnt_e[ci].load()) / reps;
                row.abs_diff = std::fabs(row.p_d - row.p_e);
                // Paired difference: Var(I_d - I_e) estimated from the run.
                const double p_both = static_cast<double>(cnt_both[ci].load()) / reps;
                const double second_moment = row.p_d + row.p_e - 2.0 * p_both;
                const double var =
                    std::max(0.0, second_moment - (row.p_d - row.p_e) * (row.p_d - row.p_e));
                row.joint_3se = 3.0 * std::sqrt(var / reps);
                row.flagged = row.abs_diff > row.joint_3se;
                if (row.flagged) report.any_flagged = true;
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

double window_max_at_random_time(Trajectory& t, const RandomTimeSequence& times, std::uint32_t n,
                                 double delta, std::uint64_t replicate_id) {
    return window_max(t, times.time_at(n), delta, replicate_id, n);
}

double window_max_at_scaled(Trajectory& t, double u, double k_n, double delta,
                            std::uint64_t replicate_id, std::uint64_t n) {
    if (!(u > 0.0) || !(k_n > 0.0)) {
        throw DomainError("window_max_at_scaled: u and k_n must be positive");
    }
    const auto center = static_cast<std::uint64_t>(k_n * u);
    return window_max(t, center, delta, replicate_id, n);
}

}  // namespace stablemc
