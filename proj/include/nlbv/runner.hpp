#pragma once

#include <iosfwd>

#include "nlbv/config.hpp"

namespace nlbv {

/// Exit codes of a run.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_verification_failed = 2 };

/// Executes the configured mode and writes <out_dir>/<prefix>.json (report),
/// <prefix>.config.json (re-runnable config echo) and, for sweeps,
/// <prefix>.csv and <prefix>_<series>.dat. Returns exit_verification_failed
/// iff some pass_* verdict is false.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

/// JSON description of a field (kind, dimension and parameters).
nlohmann::json field_to_json(const FieldND& f);

}  // namespace nlbv
