#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablemc/probes.hpp"
#include "stablemc/scenarios.hpp"

namespace stablemc {

inline constexpr const char* kVersion = "0.1.0";

// Conditioning events requested for diagnostics: the scenario's U-quartile
// family, or explicit half-open intervals on U.
struct EventsSpec {
    enum class Kind { quartiles, intervals };
    Kind kind = Kind::quartiles;
    std::vector<std::pair<double, double>> intervals;

    std::vector<ConditioningEvent> build(const Scenario& scenario) const;
};

struct DiagnosticsConfig {
    std::uint32_t n = 10000;
    std::uint64_t reps = 4000;
    double alpha = 0.01;
    EventsSpec events;
};

struct RunConfig {
    ScenarioConfig scenario;
    std::uint64_t master_seed = 1;
    std::optional<ProbeGrid> probe;  // absent: scenario default grid
    std::vector<ConditionVariant> probe_variants{ConditionVariant::c, ConditionVariant::d,
                                                 ConditionVariant::e};
    std::optional<DiagnosticsConfig> diagnostics;
    std::string output_dir = "out";
    unsigned workers = 0;  // 0 = hardware concurrency
    std::uint64_t max_horizon = kDefaultMaxHorizon;
    std::uint64_t min_event_count = 200;
    bool dump_paths = false;

    ProbeGrid effective_grid() const;
    RunOptions run_options() const;
};

// Parses and fully validates a JSON config document. Unknown keys are
// rejected; defaults are filled (and documented in the CLI help).
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace stablemc
