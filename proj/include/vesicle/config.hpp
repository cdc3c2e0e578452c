#pragma once

// JSON run configuration with a versioned, strictly checked schema. Every key
// is optional except schema_version; absent keys keep the defaults below.
//
//   schema_version  1
//   name            free-form label
//   grid            cells
//   time            tau, t_end, output_every, allow_short_last_step,
//                   max_halvings, extrapolate_guess
//   model           alpha1, alpha2, beta1, beta2, D1, D2, lambda_n_max,
//                   lambda_s_max, V1, V2   (V: {"slope": s} or {"face_slopes": [...]})
//   initial         kind ("uniform" | "piecewise"), u1, u2, blocks
//                   ([{x_lo, x_hi, u1, u2}]), lambda_n0, lambda_s0
//   newton          tol, max_iter, damping_exponent,
//                   damping_mode ("capped_increment" | "paper_normalized")
//   steady          threshold, flux_tol
//   convergence     mode ("time" | "space"), step0, levels, reference, parallel

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "vesicle/convergence.hpp"
#include "vesicle/timeloop.hpp"

namespace vesicle::config {

inline constexpr int kSchemaVersion = 1;

/// Schema violation; `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error("config: " + key + ": " + message), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct SteadyOptions {
    double threshold = timeloop::kDefaultSteadyThreshold;  ///< flux uniformity for is_steady
    double flux_tol = 1e-2;  ///< tolerance of the vanishing-flux predicate

    bool operator==(const SteadyOptions& other) const = default;
};

struct ConvergenceOptions {
    convergence::Mode mode = convergence::Mode::time;
    double step0 = 1e-2;
    int levels = 5;
    double reference = 1e-5;
    bool parallel = true;

    bool operator==(const ConvergenceOptions& other) const = default;
};

struct RunConfig {
    std::string name;
    timeloop::SimulationConfig sim;
    SteadyOptions steady;
    std::optional<ConvergenceOptions> convergence;

    convergence::SweepConfig sweep() const;  ///< throws ConfigError without a convergence block

    bool operator==(const RunConfig& other) const = default;
};

/// Parses and validates; unknown keys and wrong types raise ConfigError.
RunConfig from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& cfg);

/// Reads a file; parse errors become ConfigError naming the file.
nlohmann::json read_json_file(const std::filesystem::path& path);
RunConfig load(const std::filesystem::path& path);

/// Applies "a.b.c=value". The value is parsed as JSON when possible and
/// taken as a string otherwise. Intermediate objects must exist.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Directory holding the shipped preset files: $VESICLE_PRESET_DIR if set,
/// else the source-tree presets/ directory.
std::filesystem::path preset_dir();
std::vector<std::string> preset_names();
std::filesystem::path preset_path(const std::string& name);

}  // namespace vesicle::config
