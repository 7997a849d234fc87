#include "stablemc/scenarios.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <utility>

#include "stablemc/bridge.hpp"
#include "stablemc/errors.hpp"
#include "stablemc/probes.hpp"
#include "stablemc/stats.hpp"

namespace stablemc {

ConditioningEvent whole_space_event() {
    return ConditioningEvent{"all", [](const MixingState&) { return true; }};
}

ULaw ULaw::lognormal(double mu, double sigma) {
    ULaw law;
    law.kind = Kind::lognormal;
    law.mu = mu;
    law.sigma = sigma;
    law.validate();
    return law;
}

ULaw ULaw::degenerate(double value) {
    ULaw law;
    law.kind = Kind::degenerate;
    law.value = value;
    law.validate();
    return law;
}

void ULaw::validate() const {
    switch (kind) {
        case Kind::lognormal:
            if (!(sigma >= 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
                throw DomainError("u_law: lognormal needs finite mu and sigma >= 0");
            }
            break;
        case Kind::degenerate:
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw DomainError("u_law: degenerate point must be strictly positive");
            }
            break;
    }
}

double ULaw::sample(RngStream& stream) const {
    switch (kind) {
        case Kind::lognormal:
            return std::exp(mu + sigma * stream.normal());
        case Kind::degenerate:
            return value;
    }
    return value;
}

double ULaw::quantile(double p) const {
    switch (kind) {
        case Kind::lognormal:
            return std::exp(mu + sigma * normal_quantile(p));
        case Kind::degenerate:
            return value;
    }
    return value;
}

WLaw WLaw::uniform(double lo, double hi) {
    WLaw law;
    law.kind = Kind::uniform;
    law.lo = lo;
    law.hi = hi;
    law.validate();
    return law;
}

WLaw WLaw::degenerate(double value) {
    WLaw law;
    law.kind = Kind::degenerate;
    law.value = value;
    law.validate();
    return law;
}

void WLaw::validate() const {
    switch (kind) {
        case Kind::uniform:
            if (!(lo > 0.0 && lo < hi && hi <= 1.0)) {
                throw DomainError("w_law: uniform needs 0 < lo < hi <= 1");
            }
            break;
        case Kind::degenerate:
            if (!(value > 0.0 && value <= 1.0)) {
                throw DomainError("w_law: degenerate point must lie in (0,1]");
            }
            break;
    }
}

double WLaw::sample(RngStream& stream) const {
    switch (kind) {
        case Kind::uniform:
            // hi - (hi-lo) * u keeps the support at (lo, hi].
            return hi - (hi - lo) * stream.uniform01();
        case Kind::degenerate:
            return value;
    }
    return value;
}

double WLaw::quantile(double p) const {
    switch (kind) {
        case Kind::uniform:
            return lo + p * (hi - lo);
        case Kind::degenerate:
            return value;
    }
    return value;
}

namespace {

// Time indices are clamped here so runaway random times surface as
// HorizonExceeded in the probes instead of overflowing.
constexpr std::uint64_t kIndexCeiling = std::uint64_t{1} << 62;

std::uint64_t clamp_index(double v) {
    if (!(v >= 0.0)) return 0;
    if (v >= static_cast<double>(kIndexCeiling)) return kIndexCeiling;
    return static_cast<std::uint64_t>(v);
}

// Positions of the ones of the rotation trajectory: floor(u * e^m) for
// m = 0, 1, 2, ... — the same floating-point expression the random times
// use, which is what makes the hit identities exact.
std::vector<std::uint64_t> rotation_one_positions(double u) {
    std::vector<std::uint64_t> ones;
    for (std::uint32_t m = 0;; ++m) {
        const double pos = u * std::exp(static_cast<double>(m));
        if (!(pos < static_cast<double>(kIndexCeiling))) break;
        const std::uint64_t p = static_cast<std::uint64_t>(pos);
        if (ones.empty() || p > ones.back()) ones.push_back(p);
    }
    return ones;
}

std::vector<ConditioningEvent> quartile_events_from(const std::function<double(double)>& quantile,
                                                    const std::string& prefix) {
    const double b1 = quantile(0.25);
    const double b2 = quantile(0.50);
    const double b3 = quantile(0.75);
    if (!(b1 < b3)) {
        return {whole_space_event()};  // degenerate law: quartiles collapse
    }
    std::vector<ConditioningEvent> events;
    events.push_back({prefix + "_q1", [b1](const MixingState& m) { return m.u < b1; }});
    events.push_back(
        {prefix + "_q2", [b1, b2](const MixingState& m) { return m.u >= b1 && m.u < b2; }});
    events.push_back(
        {prefix + "_q3", [b2, b3](const MixingState& m) { return m.u >= b2 && m.u < b3; }});
    events.push_back({prefix + "_q4", [b3](const MixingState& m) { return m.u >= b3; }});
    return events;
}

class MovingIndicatorScenario : public Scenario {
public:
    MovingIndicatorScenario(MovingIndicatorConfig cfg, std::uint64_t master_seed,
                            std::uint64_t max_horizon)
        : cfg_(std::move(cfg)),
          seed_(master_seed),
          horizon_(max_horizon),
          kernel_(0.0) {
        for (std::size_t i = 1; i < cfg_.r_values.size(); ++i) {
            if (cfg_.r_values[i] < cfg_.r_values[i - 1]) {
                throw ValidationError("moving_indicator: r_values must be nondecreasing");
            }
        }
    }

    std::string name() const override { return "moving_indicator"; }

    std::uint32_t r_at(std::uint32_t n) const {
        if (cfg_.r_values.empty()) return n;
        if (n >= cfg_.r_values.size()) {
            throw ValidationError("moving_indicator: r_values has no entry for n=" +
                                  std::to_string(n));
        }
        return cfg_.r_values[n];
    }

    ScenarioInstance make_instance(std::uint64_t rep) const override {
        RngStream omega_stream = derive_stream(seed_, rep, "omega");
        const double omega = omega_stream.uniform01();
        const double u = std::exp(omega);

        ScenarioInstance inst;
        inst.mix.omega = omega;
        inst.mix.u = u;
        inst.trajectory =
            std::make_unique<IndicatorTrajectory>(rotation_one_positions(u), horizon_);
        const auto* self = this;
        inst.times.time_at = [self, u](std::uint32_t n) {
            return clamp_index(u * std::exp(static_cast<double>(self->r_at(n))));
        };
        inst.times.scaling = [self](std::uint32_t n) {
            return std::exp(static_cast<double>(self->r_at(n)));
        };
        inst.times.scaled_time = inst.times.time_at;  // floor(k_n U) = N_n identically
        inst.kernel_stream = derive_stream(seed_, rep, "kernel");
        return inst;
    }

    const KernelSampler& kernel() const override { return kernel_; }

    std::vector<ConditioningEvent> quartile_events() const override {
        return quartile_events_from([](double p) { return std::exp(p); }, "U");
    }

private:
    MovingIndicatorConfig cfg_;
    std::uint64_t seed_;
    std::uint64_t horizon_;
    PointMassKernel kernel_;
};

class HittingMidpointScenario : public Scenario {
public:
    HittingMidpointScenario(std::uint64_t master_seed, std::uint64_t max_horizon)
        : seed_(master_seed), horizon_(max_horizon), kernel_(0.0) {}

    std::string name() const override { return "hitting_midpoint"; }

    ScenarioInstance make_instance(std::uint64_t rep) const override {
        RngStream omega_stream = derive_stream(seed_, rep, "omega");
        const double omega = omega_stream.uniform01();
        const double u = std::exp(omega);
        // N_n / k_n converges to U (1+e) / (2e), not to U itself.
        const double u_eff = u * (1.0 + std::numbers::e) / (2.0 * std::numbers::e);

        auto ones = std::make_shared<std::vector<std::uint64_t>>(rotation_one_positions(u));

        ScenarioInstance inst;
        inst.mix.omega = omega;
        inst.mix.u = u;
        inst.mix.u_eff = u_eff;
        inst.trajectory = std::make_unique<IndicatorTrajectory>(*ones, horizon_);
        // T_n = ones[n-1] (the n-th hit of the trajectory), T_0 = 0.
        inst.times.time_at = [ones](std::uint32_t n) -> std::uint64_t {
            if (n == 0) return 0;
            const std::uint64_t prev = n >= 2 && n - 2 < ones->size() ? (*ones)[n - 2] : 0;
            if (n - 1 >= ones->size()) return kIndexCeiling;
            return (prev + (*ones)[n - 1]) / 2;
        };
        inst.times.scaling = [](std::uint32_t n) {
            return std::exp(static_cast<double>(n) - 1.0);
        };
        inst.times.scaled_time = [u_eff](std::uint32_t n) {
            if (n == 0) return std::uint64_t{0};
            return clamp_index(std::exp(static_cast<double>(n) - 1.0) * u_eff);
        };
        inst.kernel_stream = derive_stream(seed_, rep, "kernel");
        return inst;
    }

    const KernelSampler& kernel() const override { return kernel_; }

    std::vector<ConditioningEvent> quartile_events() const override {
        return quartile_events_from([](double p) { return std::exp(p); }, "U");
    }

private:
    std::uint64_t seed_;
    std::uint64_t horizon_;
    PointMassKernel kernel_;
};

class ExchangeableCltScenario : public Scenario {
public:
    ExchangeableCltScenario(ExchangeableCltConfig cfg, std::uint64_t master_seed,
                            std::uint64_t max_horizon)
        : cfg_(cfg), seed_(master_seed), horizon_(max_horizon) {
        cfg_.u_law.validate();
    }

    std::string name() const override { return "exchangeable_clt"; }

    ScenarioInstance make_instance(std::uint64_t rep) const override {
        RngStream u_stream = derive_stream(seed_, rep, "U");
        const double u = cfg_.u_law.sample(u_stream);

        ScenarioInstance inst;
        inst.mix.u = u;

        // X_0 = 0, X_j = U * S_j / sqrt(j) with S the running sum of the
        // replicate's i.i.d. standard normals.
        struct State {
            RngStream stream;
            double sum = 0.0;
        };
        auto state = std::make_shared<State>(State{derive_stream(seed_, rep, "V"), 0.0});
        auto extend = [state, u](std::vector<double>& values, std::uint64_t needed) {
            if (values.empty()) values.push_back(0.0);
            const std::uint64_t target = needed + needed / 4 + 64;
            std::vector<double> draws(target + 1 - values.size());
            state->stream.fill_normal(draws);
            for (const double g : draws) {
                state->sum += g;
                const double j = static_cast<double>(values.size());
                values.push_back(u * state->sum / std::sqrt(j));
            }
        };
        inst.trajectory = std::make_unique<RealSeriesTrajectory>(std::move(extend), horizon_);
        inst.times.time_at = [u](std::uint32_t n) {
            return clamp_index(static_cast<double>(n) * u);
        };
        inst.times.scaling = [](std::uint32_t n) { return static_cast<double>(n); };
        inst.times.scaled_time = inst.times.time_at;  // floor(k_n U) with k_n = n
        inst.kernel_stream = derive_stream(seed_, rep, "kernel");
        return inst;
    }

    const KernelSampler& kernel() const override { return kernel_; }

    std::vector<ConditioningEvent> quartile_events() const override {
        const ULaw law = cfg_.u_law;
        return quartile_events_from([law](double p) { return law.quantile(p); }, "U");
    }

private:
    ExchangeableCltConfig cfg_;
    std::uint64_t seed_;
    std::uint64_t horizon_;
    ScaledNormalKernel kernel_;
};

// One draw from the composition kernel: sup_t |B(F(t))| for a fresh bridge.
class BridgeCompositionKernel : public KernelSampler {
public:
    explicit BridgeCompositionKernel(std::size_t bridge_grid)
        : grid_(uniform_grid(bridge_grid)) {}

    double draw(const MixingState& mix, RngStream& stream) const override {
        const double w = mix.w;
        const RandomDistributionFunction F{
            [w](double t) { return std::min(t / w, 1.0); }};
        const BrownianBridgePath b = brownian_bridge_sample(grid_, stream);
        return compose_bridge_with_F(b, F, grid_).max_abs();
    }

    std::span<const double> grid() const { return grid_; }

private:
    std::vector<double> grid_;
};

class ExchangeableEmpiricalScenario : public Scenario {
public:
    ExchangeableEmpiricalScenario(ExchangeableEmpiricalConfig cfg, std::uint64_t master_seed,
                                  std::uint64_t max_horizon)
        : cfg_(cfg), seed_(master_seed), horizon_(max_horizon), kernel_(cfg.bridge_grid) {
        cfg_.w_law.validate();
        if (!(cfg_.u_factor > 0.0)) {
            throw DomainError("exchangeable_empirical: u_factor must keep U positive");
        }
    }

    std::string name() const override { return "exchangeable_empirical"; }

    ScenarioInstance make_instance(std::uint64_t rep) const override {
        RngStream w_stream = derive_stream(seed_, rep, "W");
        const double w = cfg_.w_law.sample(w_stream);
        const double u = cfg_.u_factor * w;

        ScenarioInstance inst;
        inst.mix.w = w;
        inst.mix.u = u;

        auto z_stream = std::make_shared<RngStream>(derive_stream(seed_, rep, "Z"));
        auto extend_obs = [z_stream, w](std::vector<double>& zs, std::uint64_t needed) {
            const std::uint64_t target = needed + needed / 4 + 64;
            const std::size_t old = zs.size();
            zs.resize(target);
            std::span<double> fresh(zs.data() + old, zs.size() - old);
            z_stream->fill_uniform01(fresh);
            for (double& z : fresh) z *= w;  // Z = W V with V uniform
        };
        const std::size_t drift_grid = cfg_.drift_grid;
        const RandomDistributionFunction F{[w](double t) { return std::min(t / w, 1.0); }};
        auto build = [F, drift_grid](std::uint64_t /*j*/, std::span<const double> zs) {
            return empirical_process(zs, F, drift_grid);
        };
        inst.trajectory = std::make_unique<PathTrajectory>(
            std::move(extend_obs), std::move(build), horizon_, cfg_.path_metric,
            cfg_.skorohod_resolution);
        inst.times.time_at = [u](std::uint32_t n) {
            return clamp_index(static_cast<double>(n) * u);
        };
        inst.times.scaling = [](std::uint32_t n) { return static_cast<double>(n); };
        inst.times.scaled_time = inst.times.time_at;
        inst.kernel_stream = derive_stream(seed_, rep, "kernel");
        return inst;
    }

    const KernelSampler& kernel() const override { return kernel_; }

    std::vector<ConditioningEvent> quartile_events() const override {
        const WLaw law = cfg_.w_law;
        const double factor = cfg_.u_factor;
        return quartile_events_from(
            [law, factor](double p) { return factor * law.quantile(p); }, "U");
    }

    const ExchangeableEmpiricalConfig& config() const { return cfg_; }

private:
    ExchangeableEmpiricalConfig cfg_;
    std::uint64_t seed_;
    std::uint64_t horizon_;
    BridgeCompositionKernel kernel_;
};

}  // namespace

ScenarioConfig ScenarioConfig::by_name(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    if (name == "moving_indicator") {
        cfg.params = MovingIndicatorConfig{};
    } else if (name == "hitting_midpoint") {
        cfg.params = HittingMidpointConfig{};
    } else if (name == "exchangeable_clt") {
        cfg.params = ExchangeableCltConfig{};
    } else if (name == "exchangeable_empirical") {
        cfg.params = ExchangeableEmpiricalConfig{};
    } else {
        throw ValidationError("unknown scenario '" + name + "'");
    }
    return cfg;
}

std::unique_ptr<Scenario> make_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed,
                                        std::uint64_t max_horizon) {
    if (cfg.name == "moving_indicator") {
        return std::make_unique<MovingIndicatorScenario>(
            std::get<MovingIndicatorConfig>(cfg.params), master_seed, max_horizon);
    }
    if (cfg.name == "hitting_midpoint") {
        return std::make_unique<HittingMidpointScenario>(master_seed, max_horizon);
    }
    if (cfg.name == "exchangeable_clt") {
        return std::make_unique<ExchangeableCltScenario>(
            std::get<ExchangeableCltConfig>(cfg.params), master_seed, max_horizon);
    }
    if (cfg.name == "exchangeable_empirical") {
        return std::make_unique<ExchangeableEmpiricalScenario>(
            std::get<ExchangeableEmpiricalConfig>(cfg.params), master_seed, max_horizon);
    }
    throw ValidationError("unknown scenario '" + cfg.name + "'");
}

ProbeGrid default_probe_grid(const std::string& scenario_name) {
    ProbeGrid grid;
    if (scenario_name == "moving_indicator") {
        grid.n_values = {100, 1000, 5000, 10000};
        grid.delta_values = {0.4, 0.2, 0.1, 0.05};
        grid.epsilon_values = {0.5, 0.25, 0.1};
        grid.replications = 2000;
    } else if (scenario_name == "hitting_midpoint") {
        grid.n_values = {6, 8, 10, 12};
        grid.delta_values = {0.4, 0.2, 0.1, 0.05};
        grid.epsilon_values = {0.5, 0.25, 0.1};
        grid.replications = 2000;
    } else if (scenario_name == "exchangeable_clt") {
        grid.n_values = {250, 1000, 4000, 10000};
        grid.delta_values = {0.4, 0.2, 0.1, 0.05, 0.01};
        grid.epsilon_values = {0.5, 0.25};
        grid.replications = 1000;
    } else if (scenario_name == "exchangeable_empirical") {
        grid.n_values = {64, 256, 1024, 2000};
        grid.delta_values = {0.2, 0.1, 0.05};
        grid.epsilon_values = {0.5, 0.25};
        grid.replications = 400;
    } else {
        throw ValidationError("unknown scenario '" + scenario_name + "'");
    }
    return grid;
}

double increment_variance(std::uint64_t n, std::uint64_t m) {
    if (n < 1 || n > m) {
        throw DomainError("increment_variance: need 1 <= n <= m");
    }
    return 2.0 - 2.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(m));
}

double oscillation_scale(double delta) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw DomainError("oscillation_scale: delta must lie in (0, 1/2)");
    }
    return 2.0 * std::sqrt(2.0 - 2.0 * std::sqrt(1.0 - delta));
}

double cstar_failure_bound(double u, double delta) {
    if (!(u > 0.0)) {
        throw DomainError("cstar_failure_bound: u must be positive");
    }
    return 2.0 * normal_cdf(-1.0 / (u * oscillation_scale(delta)));
}

}  // namespace stablemc
