#pragma once

#include <vector>

#include "vesicle/grid.hpp"
#include "vesicle/model.hpp"
#include "vesicle/timeloop.hpp"

namespace vesicle::convergence {

/// ||u - u_ref||_2 / sqrt(2 (m + 1)) over the concatenation (u1, u2, lambda_n, lambda_s).
double mean_error(const FieldState& u, const PoolState& pools, const FieldState& ref,
                  const PoolState& ref_pools);

/// Cell averages of a fine-grid field on a coarser grid (overlap-weighted, so
/// the fine cell count need not be a multiple of the coarse one).
FieldState restrict_to(const FieldState& fine, const Grid& fine_grid, const Grid& coarse_grid);

enum class Mode { time, space };

struct SweepConfig {
    Mode mode = Mode::time;
    timeloop::SimulationConfig base;  ///< grid (time mode) or tau (space mode) is held fixed
    double step0 = 1e-2;              ///< tau_0 or h_0; level k uses step0 * 2^-k
    int levels = 5;                   ///< k = 1..levels
    double reference = 1e-5;          ///< reference tau or h
    bool parallel = true;

    void validate() const;
};

struct LevelResult {
    int level = 0;
    double step = 0.0;  ///< tau or h of this level
    double error = 0.0;
    double observed_order = 0.0;  ///< log2(e_{k-1} / e_k); NaN for the first level
};

/// Configuration of level k (k = 0 gives the reference run).
timeloop::SimulationConfig level_config(const SweepConfig& sweep, int level);

/// Runs the reference and every level to base.t_end and compares final states.
std::vector<LevelResult> run_sweep(const SweepConfig& sweep);

}  // namespace vesicle::convergence
