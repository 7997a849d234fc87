#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stablemc/step_function.hpp"

namespace stablemc {

// Window index bounds: every integer j >= 0 with |center - j| <= center*delta.
// The comparison is done directly on the double product, never by rounding
// center*delta to an integer first.
struct WindowBounds {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};
WindowBounds window_bounds(std::uint64_t center, double delta);

// One replicate's lazily materialized sequence of points in a metric space.
// Single-threaded per instance; replicates own separate trajectories.
class Trajectory {
public:
    explicit Trajectory(std::uint64_t max_horizon) : horizon_(max_horizon) {}
    virtual ~Trajectory() = default;

    std::uint64_t max_horizon() const { return horizon_; }

    // d(X_i, X_j). May materialize up to max(i, j).
    virtual double distance(std::uint64_t i, std::uint64_t j) = 0;

    // The scenario's real functional of X_j (identity on real scenarios,
    // sup-norm on path scenarios).
    virtual double observe(std::uint64_t j) = 0;

    // out[j - lo] = d(X_j, X_center) for j in [lo, hi].
    virtual void distance_profile(std::uint64_t lo, std::uint64_t hi, std::uint64_t center,
                                  std::span<double> out) = 0;

    // max_{j in [lo, hi]} d(X_j, X_center); overridden where a shortcut exists.
    virtual double window_max_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t center);

    // True when window_max_range is O(log) and probes need not build profiles.
    virtual bool cheap_window_max() const { return false; }

protected:
    std::uint64_t horizon_;
    std::vector<double> scratch_;
};

// M_center(delta): max d(X_j, X_center) over the window; 0 when the window
// is just {center}. Throws HorizonExceeded (with the replicate/n context
// supplied by the caller) when the window's right end passes the horizon.
double window_max(Trajectory& t, std::uint64_t center, double delta,
                  std::uint64_t replicate_id = 0, std::uint64_t n = 0);

// 0/1-valued trajectory stored as the sorted positions of its ones.
class IndicatorTrajectory : public Trajectory {
public:
    IndicatorTrajectory(std::vector<std::uint64_t> one_positions, std::uint64_t max_horizon);

    double value_at(std::uint64_t j) const;
    const std::vector<std::uint64_t>& one_positions() const { return ones_; }

    double distance(std::uint64_t i, std::uint64_t j) override;
    double observe(std::uint64_t j) override { return value_at(j); }
    void distance_profile(std::uint64_t lo, std::uint64_t hi, std::uint64_t center,
                          std::span<double> out) override;
    double window_max_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t center) override;
    bool cheap_window_max() const override { return true; }

private:
    std::vector<std::uint64_t> ones_;
};

// Real-valued trajectory; values are extended on demand by the generator and
// cached, so repeated windows only pay for the reduction.
class RealSeriesTrajectory : public Trajectory {
public:
    // extend(values, needed): grow values to size > needed, deterministically.
    using Extender = std::function<void(std::vector<double>&, std::uint64_t)>;

    RealSeriesTrajectory(Extender extend, std::uint64_t max_horizon);

    double value_at(std::uint64_t j);

    double distance(std::uint64_t i, std::uint64_t j) override;
    double observe(std::uint64_t j) override { return value_at(j); }
    void distance_profile(std::uint64_t lo, std::uint64_t hi, std::uint64_t center,
                          std::span<double> out) override;
    double window_max_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t center) override;

private:
    void ensure(std::uint64_t j);

    Extender extend_;
    std::vector<double> values_;
};

// Trajectory of cadlag paths (the empirical-process scenario). Paths are
// built per index from a growing observation prefix.
class PathTrajectory : public Trajectory {
public:
    enum class Metric { sup_norm, skorohod };

    // build(j, zs): path from the first j observations (j >= 1).
    using PathBuilder = std::function<StepFunction(std::uint64_t, std::span<const double>)>;
    // extend_obs(zs, needed): grow the observation cache to size >= needed.
    using ObsExtender = std::function<void(std::vector<double>&, std::uint64_t)>;

    PathTrajectory(ObsExtender extend_obs, PathBuilder build, std::uint64_t max_horizon,
                   Metric metric = Metric::sup_norm, int skorohod_resolution = 512);

    StepFunction path_at(std::uint64_t j);

    double distance(std::uint64_t i, std::uint64_t j) override;
    double observe(std::uint64_t j) override;
    void distance_profile(std::uint64_t lo, std::uint64_t hi, std::uint64_t center,
                          std::span<double> out) override;

private:
    double path_distance(const StepFunction& a, const StepFunction& b) const;

    ObsExtender extend_obs_;
    PathBuilder build_;
    Metric metric_;
    int resolution_;
    std::vector<double> obs_;
};

}  // namespace stablemc
