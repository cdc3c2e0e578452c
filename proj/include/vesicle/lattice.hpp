#pragma once

// Deterministic size-exclusion lattice dynamics with reservoir exchange at the
// two end sites. Its diffusion limit is the continuum model, so it serves as
// an independent check of the finite-volume solver.

#include <stdexcept>
#include <string>
#include <vector>

#include "vesicle/model.hpp"

namespace vesicle::lattice {

struct LatticeModel {
    double gamma1 = 1.0;  ///< time-scale constants, D_i = 1 / gamma_i
    double gamma2 = 1.0;
    double eta1 = 0.5;    ///< potential coupling
    double eta2 = 0.5;
    double a1 = 0.0;      ///< soma release of species 1, alpha1 = a1 D1
    double a2 = 0.0;      ///< growth cone release of species 2, alpha2 = a2 D2
    double b1 = 0.0;      ///< growth cone uptake of species 1, beta1 = b1 D1
    double b2 = 0.0;      ///< soma uptake of species 2, beta2 = b2 D2
    double lambda_n_max = 1.0;
    double lambda_s_max = 1.0;

    /// Lattice constants whose diffusion limit has the given continuum parameters.
    static LatticeModel from_continuum(const ModelParameters& params);
    void validate() const;
};

struct LatticeState {
    std::vector<double> u1;
    std::vector<double> u2;
    double lambda_n = 0.0;
    double lambda_s = 0.0;

    std::size_t sites() const { return u1.size(); }
    /// h * sum(u1 + u2) + lambda_n + lambda_s.
    double total(double h) const;
};

/// Site values V_i(x_j) with sites at the cell centers (j + 1/2) h.
struct SitePotentials {
    std::vector<double> V1;
    std::vector<double> V2;

    static SitePotentials sample(const ModelParameters& params, int sites);
};

class LatticeInstability : public std::runtime_error {
public:
    LatticeInstability(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

/// Time derivative of every component. Bulk exchange per bond (j, j+1):
///     [u_j u0_{j+1} e^{eta (V_{j+1} - V_j)} - u_{j+1} u0_j e^{-eta (V_{j+1} - V_j)}] / (gamma h^2),
/// reservoir exchange at sites 0 and m-1 scaled by 1 / (gamma h).
LatticeState lattice_rhs(const LatticeState& state, const LatticeModel& model, double h,
                         const SitePotentials& potentials);

enum class Integrator { explicit_euler, midpoint };

/// Largest dt accepted by lattice_integrate: safety * gamma_min * h^2 / 4.
double stable_dt(const LatticeModel& model, double h, double safety = 1.0);

/// Integrates to t_end with steps of at most dt (last one shortened).
LatticeState lattice_integrate(const LatticeState& state0, const LatticeModel& model,
                               double t_end, double dt, double h,
                               const SitePotentials& potentials,
                               Integrator integrator = Integrator::explicit_euler);

}  // namespace vesicle::lattice
