#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablemc/config.hpp"
#include "stablemc/diagnostics.hpp"
#include "stablemc/probes.hpp"

namespace stablemc {

struct StageError {
    std::string stage;
    std::string message;
};

struct RunReport {
    std::string version = kVersion;
    std::uint64_t master_seed = 0;
    nlohmann::json config_echo;
    std::vector<ConditionEstimate> probes;
    std::optional<EquivalenceReport> equivalence;
    std::vector<DiagnosticReport> diagnostics;
    std::vector<StageError> stage_errors;  // partial results are kept, never dropped
    std::uint64_t total_replicates = 0;
    bool any_fail = false;        // failed diagnostic verdict or flagged equivalence row
    double wall_seconds = 0.0;    // reported on stderr only; not serialized
};

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

// Writes report.json, manifest.json and tables/*.csv (one CSV per probe
// table, plus equivalence and diagnostics when present).
void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace stablemc
