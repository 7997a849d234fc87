#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "stablemc/rng.hpp"
#include "stablemc/trajectory.hpp"

namespace stablemc {

// The replicate's mixing variables: everything the conditioning sigma-field
// can see. Fields not used by a scenario stay NaN.
struct MixingState {
    double u = std::numeric_limits<double>::quiet_NaN();      // limit of N_n / k_n
    double u_eff = std::numeric_limits<double>::quiet_NaN();  // effective limit if != u
    double omega = std::numeric_limits<double>::quiet_NaN();  // sample point (rotation examples)
    double w = std::numeric_limits<double>::quiet_NaN();      // scale (empirical example)

    double effective_u() const { return std::isnan(u_eff) ? u : u_eff; }
};

// Measurable event on the mixing variables; stands in for an element of the
// conditioning sigma-field.
struct ConditioningEvent {
    std::string label;
    std::function<bool(const MixingState&)> contains;
};

ConditioningEvent whole_space_event();

// Sampler for the random limit law K, conditional on the replicate's mixing
// state, already mapped through the scenario's real functional.
class KernelSampler {
public:
    virtual ~KernelSampler() = default;
    virtual double draw(const MixingState& mix, RngStream& stream) const = 0;
};

// Point mass at a (possibly mixing-dependent) value.
class PointMassKernel : public KernelSampler {
public:
    explicit PointMassKernel(double value) : value_([value](const MixingState&) { return value; }) {}
    explicit PointMassKernel(std::function<double(const MixingState&)> value)
        : value_(std::move(value)) {}
    double draw(const MixingState& mix, RngStream&) const override { return value_(mix); }

private:
    std::function<double(const MixingState&)> value_;
};

// N(0, u^2), sampled as u * G.
class ScaledNormalKernel : public KernelSampler {
public:
    double draw(const MixingState& mix, RngStream& stream) const override {
        return mix.u * stream.normal();
    }
};

// Per-replicate random times N_n with their scaling constants k_n, plus the
// canonical centers floor(k_n * U) used by the scaled-window probes.
struct RandomTimeSequence {
    std::function<std::uint64_t(std::uint32_t)> time_at;      // N_n
    std::function<double(std::uint32_t)> scaling;             // k_n
    std::function<std::uint64_t(std::uint32_t)> scaled_time;  // floor(k_n * U)
};

struct ScenarioInstance {
    MixingState mix;
    std::unique_ptr<Trajectory> trajectory;
    RandomTimeSequence times;
    RngStream kernel_stream;
};

// Factory of replicable scenario instances. All members must be safe to call
// concurrently; an instance itself belongs to one worker.
class Scenario {
public:
    virtual ~Scenario() = default;
    virtual std::string name() const = 0;
    virtual ScenarioInstance make_instance(std::uint64_t replicate_id) const = 0;
    virtual const KernelSampler& kernel() const = 0;
    virtual std::vector<ConditioningEvent> quartile_events() const = 0;
};

struct RunOptions {
    std::uint64_t min_event_count = 200;
    unsigned workers = 0;  // 0 = hardware concurrency
};

}  // namespace stablemc
