#pragma once

#include <stdexcept>
#include <vector>

#include "vesicle/model.hpp"
#include "vesicle/newton.hpp"
#include "vesicle/timeloop.hpp"

namespace vesicle::stationary {

class UndefinedFixedPoint : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Pool fill fractions lambda / lambda_max at a stationary state:
///     lambda_n = beta1 u1(1) / (beta1 u1(1) + alpha2),
///     lambda_s = beta2 u2(0) / (beta2 u2(0) + alpha1).
PoolState stationary_pool_values(double u1_at_1, double u2_at_0, const ModelParameters& params);

struct VanishingFluxReport {
    bool consistent = false;
    bool u1_cone_small = false;   ///< u1(1) <= tol
    bool u2_soma_small = false;   ///< u2(0) <= tol
    bool flux_small = false;      ///< |J| <= tol
    double J = 0.0;
    double J_soma = 0.0;  ///< alpha1 beta2 u2(0) / (beta2 u2(0) + alpha1) * u0(0)
    double J_cone = 0.0;  ///< beta1 alpha2 u1(1) / (beta1 u1(1) + alpha2) * u0(1)
};

/// Checks u1(1) <= tol <=> u2(0) <= tol <=> |J| <= tol on a steady summary.
/// Throws DomainError when a void-fraction trace is <= tol.
VanishingFluxReport vanishing_flux_predicate(const timeloop::SteadySummary& steady,
                                             const ModelParameters& params, double tol);

/// One species worth of data; the other species is its mirror image.
struct SymmetricSetup {
    int cells = 100;
    double tau = 1e-3;
    double t_end = 10.0;
    double alpha = 1.0;
    double beta = 1.0;
    double D = 1.0;
    double lambda_max = 1.0;
    double lambda0 = 0.0;  ///< both pools
    PotentialSpec V1;
    double background = 0.0;  ///< u1 = u2 = background where no block applies
    std::vector<timeloop::Block> blocks;  ///< mirrored with species swapped
    newton::NewtonConfig newton;
};

/// Configuration invariant under the species swap combined with x -> 1 - x.
timeloop::SimulationConfig symmetric_config(const SymmetricSetup& base);

/// max_j |u2_j - u1_{m-1-j}|.
double reflection_defect(const FieldState& field);

}  // namespace vesicle::stationary
