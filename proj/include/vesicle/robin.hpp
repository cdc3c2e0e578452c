#pragma once

// Unchecked Robin flux kernels shared by the model and the assembly. Newton
// iterates may leave the admissible set, so nothing here validates.

#include "vesicle/model.hpp"

namespace vesicle::detail {

inline BoundaryFluxes robin_fluxes(double u1_soma, double u2_soma, double u1_cone,
                                   double u2_cone, double lambda_n, double lambda_s,
                                   const ModelParameters& p) {
    const double u0_soma = 1.0 - u1_soma - u2_soma;
    const double u0_cone = 1.0 - u1_cone - u2_cone;
    const double fill_s = lambda_s / p.lambda_s_max;
    const double fill_n = lambda_n / p.lambda_n_max;
    return {p.alpha1 * fill_s * u0_soma, p.beta1 * (1.0 - fill_n) * u0_cone * u1_cone,
            -p.beta2 * (1.0 - fill_s) * u0_soma * u2_soma, -p.alpha2 * fill_n * u0_cone};
}

/// Partial derivatives of one boundary flux with respect to the adjacent
/// cell's (u1, u2) and the adjacent pool.
struct FluxPartials {
    double du1 = 0.0;
    double du2 = 0.0;
    double dpool = 0.0;
};

struct RobinPartials {
    FluxPartials j1_0, j2_0;  // w.r.t. soma cell and lambda_s
    FluxPartials j1_1, j2_1;  // w.r.t. cone cell and lambda_n
};

inline RobinPartials robin_partials(double u1_soma, double u2_soma, double u1_cone,
                                    double u2_cone, double lambda_n, double lambda_s,
                                    const ModelParameters& p) {
    const double u0_soma = 1.0 - u1_soma - u2_soma;
    const double u0_cone = 1.0 - u1_cone - u2_cone;
    const double fill_s = lambda_s / p.lambda_s_max;
    const double fill_n = lambda_n / p.lambda_n_max;
    RobinPartials d;
    d.j1_0 = {-p.alpha1 * fill_s, -p.alpha1 * fill_s, p.alpha1 * u0_soma / p.lambda_s_max};
    d.j2_0 = {p.beta2 * (1.0 - fill_s) * u2_soma, -p.beta2 * (1.0 - fill_s) * (u0_soma - u2_soma),
              p.beta2 * u0_soma * u2_soma / p.lambda_s_max};
    d.j1_1 = {p.beta1 * (1.0 - fill_n) * (u0_cone - u1_cone), -p.beta1 * (1.0 - fill_n) * u1_cone,
              -p.beta1 * u0_cone * u1_cone / p.lambda_n_max};
    d.j2_1 = {p.alpha2 * fill_n, p.alpha2 * fill_n, -p.alpha2 * u0_cone / p.lambda_n_max};
    return d;
}

}  // namespace vesicle::detail
