#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vesicle/grid.hpp"
#include "vesicle/model.hpp"
#include "vesicle/newton.hpp"

namespace vesicle::timeloop {

/// Slack allowed on accepted states: u_i in [-slack, 1 + slack], u1 + u2 <= 1 + slack,
/// lambda in [-slack, lambda_max + slack].
inline constexpr double kAdmissibleSlack = 1e-12;
inline constexpr double kDefaultSteadyThreshold = 1e-3;

struct Block {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;

    bool operator==(const Block& other) const = default;
};

struct InitialCondition {
    enum class Kind { uniform, piecewise };

    Kind kind = Kind::uniform;
    double u1 = 0.0;  ///< uniform kind
    double u2 = 0.0;
    std::vector<Block> blocks;  ///< piecewise kind, zero background
    double lambda_n0 = 0.0;
    double lambda_s0 = 0.0;

    static InitialCondition uniform(double u1, double u2, double lambda_n0, double lambda_s0);
    static InitialCondition piecewise(std::vector<Block> blocks, double lambda_n0,
                                      double lambda_s0);

    /// Cell averages of the initial profile (exact overlap integrals for blocks).
    FieldState build(const Grid& grid) const;
    PoolState pools() const { return {lambda_n0, lambda_s0}; }

    bool operator==(const InitialCondition& other) const = default;
};

struct SimulationConfig {
    Grid grid{2};
    double tau = 1e-3;
    double t_end = 1.0;
    ModelParameters params;
    InitialCondition initial;
    newton::NewtonConfig newton;
    int output_every = 1;  ///< steps between field snapshots
    bool allow_short_last_step = false;
    int max_halvings = 4;
    /// Start Newton from the linear extrapolation of the last two accepted
    /// states instead of the previous state.
    bool extrapolate_guess = true;

    /// Number of steps; throws DomainError if t_end / tau is not an integer
    /// and short last steps are disabled.
    int step_count() const;
    void validate() const;

    bool operator==(const SimulationConfig& other) const = default;
};

/// Extremes over every accepted state (including retry sub-steps).
struct BoundsSummary {
    double min_u = 0.0;       ///< min over cells and species
    double max_u = 0.0;
    double max_occupancy = 0.0;  ///< max of u1 + u2
    double min_pool = 0.0;       ///< min of lambda_n, lambda_s
    double max_pool_excess = 0.0;  ///< max of lambda - lambda_max
};

struct TrajectoryRecord {
    // Field snapshots at `times`.
    std::vector<double> times;
    std::vector<FieldState> snapshots;
    std::vector<PoolState> snapshot_pools;

    // Per-step scalar series; index 0 is the initial state.
    std::vector<double> step_times;
    std::vector<PoolState> pools;
    std::vector<BoundaryFluxes> fluxes;
    std::vector<double> conserved_total;
    std::vector<double> free_energy;
    std::vector<int> newton_iterations;

    BoundsSummary bounds;
    int halvings = 0;  ///< sub-step splits performed

    const FieldState& final_field() const { return snapshots.back(); }
    const PoolState& final_pools() const { return snapshot_pools.back(); }
};

/// Simulation aborted at `step` (1-based); the partially filled record is kept
/// by the caller when run(config, record) is used.
class RunError : public std::runtime_error {
public:
    RunError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

class SolverFailure : public RunError {
public:
    using RunError::RunError;
};

class AdmissibilityError : public RunError {
public:
    using RunError::RunError;
};

TrajectoryRecord run(const SimulationConfig& config);

/// Same as run(config) but fills `record` in place, so it survives a throw.
void run(const SimulationConfig& config, TrajectoryRecord& record);

/// h * sum_j (u1 + u2) + lambda_n + lambda_s.
double conserved_total(const FieldState& field, const PoolState& pools, const Grid& grid);

struct SteadySummary {
    bool is_steady = false;
    double J = 0.0;               ///< mean of J1 over all faces
    double flux_variation = 0.0;  ///< max |J1 - mean(J1)|
    double total_flux = 0.0;      ///< max |J1 + J2|
    double u1_at_cone = 0.0;      ///< trace u1(1), from cell m-1
    double u2_at_soma = 0.0;      ///< trace u2(0), from cell 0
    double u0_at_soma = 0.0;
    double u0_at_cone = 0.0;
    PoolState pools;
    std::vector<double> j1_faces;
    std::vector<double> j2_faces;
};

/// Reconstructs J1, J2 at every face of the final snapshot.
SteadySummary steady_state_detect(const TrajectoryRecord& record, const Grid& grid,
                                  const ModelParameters& params,
                                  double threshold = kDefaultSteadyThreshold);

class NotSteadyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Checks the final pools against the fixed point of the pool equations
///     0 = beta1 (1 - ln/ln_max) u0 u1 - alpha2 (ln/ln_max) u0
/// (and its soma counterpart) within `tol`. Throws NotSteadyError if the record
/// is not steady at `steady_threshold`.
bool stationary_pools_check(const TrajectoryRecord& record, const Grid& grid,
                            const ModelParameters& params, double tol,
                            double steady_threshold = kDefaultSteadyThreshold);

}  // namespace vesicle::timeloop
