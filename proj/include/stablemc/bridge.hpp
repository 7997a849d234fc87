#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stablemc/rng.hpp"
#include "stablemc/step_function.hpp"

namespace stablemc {

// Conditional distribution function of one observation given the mixing
// variables; deterministic per replicate. Nondecreasing with eval(1) = 1.
struct RandomDistributionFunction {
    std::function<double(double)> eval;
};

// Gaussian bridge sampled on a grid, linearly interpolated in between.
// Endpoint values are exactly 0.
struct BrownianBridgePath {
    std::vector<double> grid;    // 0 = t_0 < ... < t_G = 1
    std::vector<double> values;  // same length

    double operator()(double t) const;
};

// Uniform grid with `points` nodes including both endpoints (points >= 2).
std::vector<double> uniform_grid(std::size_t points);

// Exact finite-dimensional bridge law via sequential conditional increments:
// mean 0, Cov(B(s), B(t)) = s (1 - t) for s <= t.
BrownianBridgePath brownian_bridge_sample(std::span<const double> grid, RngStream& stream);

// t -> b(F(t)) sampled on the grid; one draw from the composition kernel
// given the replicate's F.
StepFunction compose_bridge_with_F(const BrownianBridgePath& b,
                                   const RandomDistributionFunction& F,
                                   std::span<const double> grid);

// Scaled centered empirical CDF: t -> sqrt(n) ((1/n) #{i : z_i <= t} - F(t)).
// Jumps are stored exactly; the continuous -sqrt(n) F(t) drift is sampled on
// a uniform grid with drift_grid nodes merged into the step representation.
// Throws DomainError if any z lies outside [0,1].
StepFunction empirical_process(std::span<const double> z, const RandomDistributionFunction& F,
                               std::size_t drift_grid = 512);

}  // namespace stablemc
