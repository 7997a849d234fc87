#pragma once

#include "stablemc/config.hpp"
#include "stablemc/report.hpp"

namespace stablemc {

enum RunSelection : unsigned {
    kRunProbes = 1u,
    kRunEquivalence = 2u,
    kRunDiagnostics = 4u,
    kRunAll = 7u,
};

// Runs the selected stages of an experiment. Deterministic given (config,
// master_seed) regardless of the worker count. Stage failures are recorded
// in the report's stage_errors and never drop the completed stages.
RunReport run_experiment(const RunConfig& cfg, unsigned selection = kRunAll);

}  // namespace stablemc
