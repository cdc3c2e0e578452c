#pragma once

// Subcommand bodies behind tools/vesicle. Each returns a process exit code.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vesicle/config.hpp"

namespace vesicle::app {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kSolverFailure = 3,
    kValidationFailure = 4,
};

/// Loads --config or --preset (exactly one) and applies overrides in order.
config::RunConfig resolve_config(const std::optional<std::filesystem::path>& config_path,
                                 const std::optional<std::string>& preset,
                                 const std::vector<std::string>& overrides);

/// Writes profiles.csv, pools.csv and summary.json into out_dir. On solver
/// failure the partial CSVs and the summary (with the cause) are still written.
int run(const config::RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Writes convergence.csv and summary.json into out_dir.
int converge(const config::RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Runs the invariant suite and prints one line per property.
int validate(std::ostream& log);

}  // namespace vesicle::app
