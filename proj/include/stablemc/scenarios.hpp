#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stablemc/probes.hpp"
#include "stablemc/scenario.hpp"

namespace stablemc {

// Law of the mixing variable U for the exchangeable CLT scenario. Must be
// supported on (0, infinity) with a finite second moment.
struct ULaw {
    enum class Kind { lognormal, degenerate };
    Kind kind = Kind::lognormal;
    double mu = 0.0;       // lognormal log-mean
    double sigma = 0.5;    // lognormal log-sd
    double value = 1.0;    // degenerate point

    static ULaw lognormal(double mu, double sigma);
    static ULaw degenerate(double value);

    double sample(RngStream& stream) const;
    double quantile(double p) const;
    void validate() const;
};

// Law of the scale W in the empirical-process scenario; supported in (0,1].
struct WLaw {
    enum class Kind { uniform, degenerate };
    Kind kind = Kind::uniform;
    double lo = 0.5;     // uniform (lo, hi]
    double hi = 1.0;
    double value = 1.0;  // degenerate point

    static WLaw uniform(double lo, double hi);
    static WLaw degenerate(double value);

    double sample(RngStream& stream) const;
    double quantile(double p) const;
    void validate() const;
};

struct MovingIndicatorConfig {
    // Exponent sequence r_n; empty means r_n = n. Must be nondecreasing.
    std::vector<std::uint32_t> r_values;
};

struct HittingMidpointConfig {};

struct ExchangeableCltConfig {
    ULaw u_law = ULaw::lognormal(0.0, 0.5);
};

struct ExchangeableEmpiricalConfig {
    WLaw w_law = WLaw::uniform(0.5, 1.0);
    double u_factor = 2.0;  // U = u_factor * W, must stay strictly positive
    std::size_t drift_grid = 512;
    std::size_t bridge_grid = 512;
    PathTrajectory::Metric path_metric = PathTrajectory::Metric::sup_norm;
    int skorohod_resolution = 512;
};

struct ScenarioConfig {
    std::string name;  // moving_indicator | hitting_midpoint | exchangeable_clt |
                       // exchangeable_empirical
    std::variant<MovingIndicatorConfig, HittingMidpointConfig, ExchangeableCltConfig,
                 ExchangeableEmpiricalConfig>
        params = MovingIndicatorConfig{};

    static ScenarioConfig by_name(const std::string& name);
};

inline constexpr std::uint64_t kDefaultMaxHorizon = std::uint64_t{1} << 22;

std::unique_ptr<Scenario> make_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed,
                                        std::uint64_t max_horizon = kDefaultMaxHorizon);

// Scenario-appropriate default probe grid (documented in the CLI help).
ProbeGrid default_probe_grid(const std::string& scenario_name);

// Variance of S_n/sqrt(n) - S_m/sqrt(m) for standard normal partial sums,
// 2 - 2 sqrt(n/m) for 1 <= n <= m.
double increment_variance(std::uint64_t n, std::uint64_t m);

// Oscillation scale f(delta) = 2 sqrt(2 - 2 sqrt(1 - delta)), delta in (0, 1/2).
double oscillation_scale(double delta);

// Lower bound 2 Phi(-1 / (u f(delta))) for the conditional exceedance
// P(M_n(2 delta) > 1/2 | U > u) of the exchangeable CLT scenario at large n.
double cstar_failure_bound(double u, double delta);

}  // namespace stablemc
