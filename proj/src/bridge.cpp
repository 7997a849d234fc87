#include "stablemc/bridge.hpp"

#include <algorithm>
#include <cmath>

#include "stablemc/errors.hpp"

namespace stablemc {

double BrownianBridgePath::operator()(double t) const {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double w = (t - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) {
        throw DomainError("uniform_grid: need at least 2 points");
    }
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    g.back() = 1.0;
    return g;
}

BrownianBridgePath brownian_bridge_sample(std::span<const double> grid, RngStream& stream) {
    if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
        throw DomainError("brownian_bridge_sample: grid must run from 0 to 1");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("brownian_bridge_sample: grid must be strictly increasing");
        }
    }
    BrownianBridgePath path;
    path.grid.assign(grid.begin(), grid.end());
    path.values.assign(grid.size(), 0.0);

    // B(t_{i+1}) | B(t_i)=b ~ N(b (1-t_{i+1})/(1-t_i), (t_{i+1}-t_i)(1-t_{i+1})/(1-t_i)).
    std::vector<double> gauss(grid.size() >= 2 ? grid.size() - 2 : 0);
    stream.fill_normal(gauss);
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        const double t0 = grid[i];
        const double t1 = grid[i + 1];
        const double shrink = (1.0 - t1) / (1.0 - t0);
        const double sd = std::sqrt((t1 - t0) * shrink);
        path.values[i + 1] = path.values[i] * shrink + sd * gauss[i];
    }
    return path;
}

StepFunction compose_bridge_with_F(const BrownianBridgePath& b,
                                   const RandomDistributionFunction& F,
                                   std::span<const double> grid) {
    double initial = b(F.eval(grid.empty() ? 0.0 : grid.front()));
    std::vector<double> times;
    std::vector<double> values;
    times.reserve(grid.size());
    values.reserve(grid.size());
    for (const double t : grid) {
        const double v = b(F.eval(t));
        if (t <= 0.0) {
            initial = v;
            continue;
        }
        times.push_back(t);
        values.push_back(v);
    }
    return StepFunction(initial, std::move(times), std::move(values));
}

StepFunction empirical_process(std::span<const double> z, const RandomDistributionFunction& F,
                               std::size_t drift_grid) {
    if (z.empty()) {
        throw EmptySample("empirical_process: need at least one observation");
    }
    if (drift_grid < 2) {
        throw DomainError("empirical_process: drift_grid must be >= 2");
    }
    std::vector<double> zs(z.begin(), z.end());
    for (const double v : zs) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("empirical_process: observations must lie in [0,1]");
        }
    }
    std::sort(zs.begin(), zs.end());
    const double n = static_cast<double>(zs.size());
    const double root_n = std::sqrt(n);

    // Node set: distinct positive observations, merged with the drift grid.
    std::vector<double> nodes;
    nodes.reserve(zs.size() + drift_grid);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (zs[i] > 0.0 && (i == 0 || zs[i] != zs[i - 1])) nodes.push_back(zs[i]);
    }
    for (std::size_t i = 1; i + 1 < drift_grid; ++i) {
        nodes.push_back(static_cast<double>(i) / static_cast<double>(drift_grid - 1));
    }
    nodes.push_back(1.0);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    auto count_leq = [&](double t) {
        return static_cast<double>(std::upper_bound(zs.begin(), zs.end(), t) - zs.begin());
    };

    const double initial = root_n * (count_leq(0.0) / n - F.eval(0.0));
    std::vector<double> values(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        values[i] = root_n * (count_leq(nodes[i]) / n - F.eval(nodes[i]));
    }
    return StepFunction(initial, std::move(nodes), std::move(values));
}

}  // namespace stablemc
