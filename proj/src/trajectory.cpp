#include "stablemc/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "stablemc/errors.hpp"
#include "stablemc/kernels.hpp"

namespace stablemc {

WindowBounds window_bounds(std::uint64_t center, double delta) {
    const double cd = static_cast<double>(center) * delta;
    std::uint64_t m = cd >= 1.0 ? static_cast<std::uint64_t>(cd) : 0;
    while (static_cast<double>(m + 1) <= cd) ++m;
    while (m > 0 && static_cast<double>(m) > cd) --m;
    WindowBounds b;
    b.lo = center > m ? center - m : 0;
    b.hi = center + m;
    return b;
}

double Trajectory::window_max_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t center) {
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    scratch_.resize(len);
    distance_profile(lo, hi, center, scratch_);
    return kernels::active().reduce_max_abs_dev(scratch_.data(), len, 0.0);
}

double window_max(Trajectory& t, std::uint64_t center, double delta, std::uint64_t replicate_id,
                  std::uint64_t n) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("window_max: delta must lie in (0,1]");
    }
    const WindowBounds b = window_bounds(center, delta);
    if (b.hi > t.max_horizon()) {
        throw HorizonExceeded(b.hi, t.max_horizon(), replicate_id, n);
    }
    if (b.lo == b.hi) return 0.0;
    return t.window_max_range(b.lo, b.hi, center);
}

IndicatorTrajectory::IndicatorTrajectory(std::vector<std::uint64_t> one_positions,
                                         std::uint64_t max_horizon)
    : Trajectory(max_horizon), ones_(std::move(one_positions)) {
    for (std::size_t i = 1; i < ones_.size(); ++i) {
        if (ones_[i] <= ones_[i - 1]) {
            throw DomainError("IndicatorTrajectory: one positions must be strictly increasing");
        }
    }
}

double IndicatorTrajectory::value_at(std::uint64_t j) const {
    return std::binary_search(ones_.begin(), ones_.end(), j) ? 1.0 : 0.0;
}

double IndicatorTrajectory::distance(std::uint64_t i, std::uint64_t j) {
    return std::fabs(value_at(i) - value_at(j));
}

void IndicatorTrajectory::distance_profile(std::uint64_t lo, std::uint64_t hi,
                                           std::uint64_t center, std::span<double> out) {
    const double vc = value_at(center);
    for (std::uint64_t j = lo; j <= hi; ++j) {
        out[static_cast<std::size_t>(j - lo)] = std::fabs(value_at(j) - vc);
    }
}

double IndicatorTrajectory::window_max_range(std::uint64_t lo, std::uint64_t hi,
                                             std::uint64_t center) {
    const auto first = std::lower_bound(ones_.begin(), ones_.end(), lo);
    const auto last = std::upper_bound(first, ones_.end(), hi);
    const std::uint64_t hits = static_cast<std::uint64_t>(last - first);
    const std::uint64_t size = hi - lo + 1;
    if (value_at(center) == 1.0) {
        return size > hits ? 1.0 : 0.0;  // any zero in the window
    }
    return hits > 0 ? 1.0 : 0.0;
}

RealSeriesTrajectory::RealSeriesTrajectory(Extender extend, std::uint64_t max_horizon)
    : Trajectory(max_horizon), extend_(std::move(extend)) {}

void RealSeriesTrajectory::ensure(std::uint64_t j) {
    if (j > horizon_) {
        throw HorizonExceeded(j, horizon_, 0, 0);
    }
    if (j >= values_.size()) {
        extend_(values_, j);
    }
}

double RealSeriesTrajectory::value_at(std::uint64_t j) {
    ensure(j);
    return values_[static_cast<std::size_t>(j)];
}

double RealSeriesTrajectory::distance(std::uint64_t i, std::uint64_t j) {
    return std::fabs(value_at(i) - value_at(j));
}

void RealSeriesTrajectory::distance_profile(std::uint64_t lo, std::uint64_t hi,
                                            std::uint64_t center, std::span<double> out) {
    ensure(hi);
    ensure(center);
    const double vc = values_[static_cast<std::size_t>(center)];
    for (std::uint64_t j = lo; j <= hi; ++j) {
        out[static_cast<std::size_t>(j - lo)] =
            std::fabs(values_[static_cast<std::size_t>(j)] - vc);
    }
}

double RealSeriesTrajectory::window_max_range(std::uint64_t lo, std::uint64_t hi,
                                              std::uint64_t center) {
    ensure(hi);
    ensure(center);
    return kernels::active().reduce_max_abs_dev(
        values_.data() + lo, static_cast<std::size_t>(hi - lo + 1),
        values_[static_cast<std::size_t>(center)]);
}

PathTrajectory::PathTrajectory(ObsExtender extend_obs, PathBuilder build,
                               std::uint64_t max_horizon, Metric metric, int skorohod_resolution)
    : Trajectory(max_horizon),
      extend_obs_(std::move(extend_obs)),
      build_(std::move(build)),
      metric_(metric),
      resolution_(skorohod_resolution) {}

StepFunction PathTrajectory::path_at(std::uint64_t j) {
    if (j > horizon_) {
        throw HorizonExceeded(j, horizon_, 0, 0);
    }
    if (j == 0) return StepFunction(0.0);
    if (obs_.size() < j) {
        extend_obs_(obs_, j);
    }
    return build_(j, std::span<const double>(obs_.data(), static_cast<std::size_t>(j)));
}

double PathTrajectory::path_distance(const StepFunction& a, const StepFunction& b) const {
    if (metric_ == Metric::sup_norm) return sup_norm(a, b);
    return skorohod_distance(a, b, resolution_).upper_bound;
}

double PathTrajectory::distance(std::uint64_t i, std::uint64_t j) {
    return path_distance(path_at(i), path_at(j));
}

double PathTrajectory::observe(std::uint64_t j) { return path_at(j).max_abs(); }

void PathTrajectory::distance_profile(std::uint64_t lo, std::uint64_t hi, std::uint64_t center,
                                      std::span<double> out) {
    const StepFunction xc = path_at(center);
    for (std::uint64_t j = lo; j <= hi; ++j) {
        out[static_cast<std::size_t>(j - lo)] =
            j == center ? 0.0 : path_distance(path_at(j), xc);
    }
}

}  // namespace stablemc
