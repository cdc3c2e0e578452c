#pragma once

// CSV and JSON writers. Numbers are printed with 17 significant digits so the
// files round-trip exactly and identical runs give identical bytes. Column
// layouts are documented in docs/output_schema.md.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vesicle/config.hpp"
#include "vesicle/convergence.hpp"
#include "vesicle/timeloop.hpp"

namespace vesicle::output {

std::string format_number(double v);

/// t,x,u1,u2,u0 for every snapshot and cell center.
void write_profiles(std::ostream& out, const timeloop::TrajectoryRecord& record, const Grid& grid);

/// t,lambda_n,lambda_s,J1_0,J1_1,J2_0,J2_1,mass_total,free_energy,newton_iters per step.
void write_pools(std::ostream& out, const timeloop::TrajectoryRecord& record);

/// level,tau_or_h,error,observed_order (nan for the first level).
void write_convergence(std::ostream& out, const std::vector<convergence::LevelResult>& levels);

struct Failure {
    std::string cause;  ///< "solver_failure", "admissibility", "lattice", ...
    std::string message;
    int step = 0;
};

/// Run summary: status, failure cause, config echo, final state, bounds, steady
/// summary (when at least two snapshots exist) and wall time.
nlohmann::json run_summary(const config::RunConfig& cfg, const timeloop::TrajectoryRecord& record,
                           const std::optional<Failure>& failure, double wall_seconds);

/// Summary of a sweep: config echo, per-level results, wall time.
nlohmann::json sweep_summary(const config::RunConfig& cfg,
                             const std::vector<convergence::LevelResult>& levels,
                             const std::optional<Failure>& failure, double wall_seconds);

}  // namespace vesicle::output
