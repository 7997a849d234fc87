#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stablemc {

// Cadlag piecewise-constant function on [0,1]: initial_value on [0, t_1),
// then values[i] on [t_{i+1}, t_{i+2}) with t's strictly increasing in (0,1].
class StepFunction {
public:
    StepFunction() = default;  // constant 0
    explicit StepFunction(double constant) : initial_(constant) {}
    StepFunction(double initial_value, std::vector<double> jump_times,
                 std::vector<double> values);

    double operator()(double t) const;

    double initial_value() const { return initial_; }
    const std::vector<double>& jump_times() const { return times_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t node_count() const { return times_.size(); }

    // Drops nodes where the value does not actually change.
    StepFunction compressed() const;

    // sup_t |x(t)|, exact for step functions.
    double max_abs() const;

private:
    double initial_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
};

// Strictly increasing piecewise-linear time deformation fixing 0 and 1.
class TimeChange {
public:
    TimeChange();  // identity
    TimeChange(std::vector<double> domain_nodes, std::vector<double> image_nodes);

    double operator()(double t) const;
    double inverse_at(double v) const;
    TimeChange inverse() const;

    // sup_t |lambda(t) - t|; attained at the nodes.
    double max_dev() const;

    const std::vector<double>& domain_nodes() const { return dom_; }
    const std::vector<double>& image_nodes() const { return img_; }

private:
    std::vector<double> dom_;  // 0 = d_0 < ... < d_m = 1
    std::vector<double> img_;  // 0 = i_0 < ... < i_m = 1
};

// x composed with a time change: t -> x(lambda(t)), again a step function.
StepFunction compose_time_change(const StepFunction& x, const TimeChange& lambda);

// sup over [0,1] of |x(t) - y(t)|; exact (swept over the merged node set).
double sup_norm(const StepFunction& x, const StepFunction& y);

std::vector<double> sample_on_grid(const StepFunction& x, std::span<const double> grid);

struct SkorohodResult {
    double upper_bound = 0.0;        // certified: true distance <= this <= sup_norm
    bool matching_exhausted = true;  // jump alignment search ran (both sides under the cap)
    bool resolution_advisory = false;  // cap exceeded, only grid candidates were tried
};

// Upper bound for the Skorohod J1 distance: the best of the identity change,
// an exhaustive min-max alignment of the two jump sets (when both have at
// most matching_cap jumps after compression), and a family of piecewise-linear
// deformations with resolution steps. Every candidate's cost is evaluated
// exactly, so the result is always a valid upper bound.
SkorohodResult skorohod_distance(const StepFunction& x, const StepFunction& y, int resolution,
                                 std::size_t matching_cap = 20);

}  // namespace stablemc
