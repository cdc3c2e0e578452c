#pragma once

// Continuous model: parameters, potentials, entropy density and free energy,
// the cross-diffusion matrix, entropy variables and the Robin boundary fluxes.

#include <array>
#include <vector>

#include "vesicle/grid.hpp"

namespace vesicle {

enum class Species : int { anterograde = 0, retrograde = 1 };

inline constexpr std::array<Species, 2> kSpecies{Species::anterograde, Species::retrograde};

/// Potential V_i in units of kT. Linear potentials V(x) = slope * x; a
/// tabulated potential carries dV/dx at every face of a specific grid.
class PotentialSpec {
public:
    PotentialSpec() = default;

    static PotentialSpec linear(double slope);
    static PotentialSpec tabulated(std::vector<double> face_slopes);

    bool is_tabulated() const { return !face_slopes_.empty(); }
    double slope() const { return slope_; }
    const std::vector<double>& face_slopes() const { return face_slopes_; }

    /// dV/dx at face `face` (0..m).
    double slope_at_face(int face, const Grid& grid) const;

    /// V at the center of `cell`. Tabulated potentials are integrated from
    /// V(0) = 0 with the face slopes (midpoint rule per half cell).
    double value_at_cell(int cell, const Grid& grid) const;

    /// Same potential with x -> 1 - x (slope negated, table reversed and negated).
    PotentialSpec reflected() const;

    bool operator==(const PotentialSpec& other) const = default;

private:
    double slope_ = 0.0;
    std::vector<double> face_slopes_;
};

struct ModelParameters {
    double alpha1 = 0.0;  ///< soma -> neurite release rate of species 1
    double alpha2 = 0.0;  ///< growth cone -> neurite release rate of species 2
    double beta1 = 0.0;   ///< neurite -> growth cone uptake rate of species 1
    double beta2 = 0.0;   ///< neurite -> soma uptake rate of species 2
    double D1 = 1.0;
    double D2 = 1.0;
    double lambda_n_max = 1.0;  ///< growth cone capacity
    double lambda_s_max = 1.0;  ///< soma capacity
    PotentialSpec V1;
    PotentialSpec V2;

    double diffusivity(Species s) const { return s == Species::anterograde ? D1 : D2; }
    const PotentialSpec& potential(Species s) const {
        return s == Species::anterograde ? V1 : V2;
    }

    /// Throws DomainError unless D_i > 0, rates >= 0, capacities > 0.
    void validate() const;

    bool operator==(const ModelParameters& other) const = default;
};

struct Concentrations {
    double u1 = 0.0;
    double u2 = 0.0;

    double u0() const { return 1.0 - u1 - u2; }
    double of(Species s) const { return s == Species::anterograde ? u1 : u2; }
};

/// Reservoir occupancies: growth cone (n) and soma (s).
struct PoolState {
    double lambda_n = 0.0;
    double lambda_s = 0.0;

    bool operator==(const PoolState& other) const = default;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

/// Fluxes through the two ends, positive in +x direction.
struct BoundaryFluxes {
    double j1_0 = 0.0;  ///< species 1 at the soma (x = 0)
    double j1_1 = 0.0;  ///< species 1 at the growth cone (x = 1)
    double j2_0 = 0.0;
    double j2_1 = 0.0;
};

void check_admissible(const Concentrations& c, double slack = 0.0);
void check_admissible(const PoolState& pools, const ModelParameters& params, double slack = 0.0);

/// h(u) = sum_i u_i (log u_i - 1), summed over u1, u2 and u0, with 0 log 0 = 0.
double entropy_density(const Concentrations& c);

/// Midpoint quadrature of the free energy  int (h(u) - u1 V1 - u2 V2) dx.
double free_energy(const FieldState& field, const ModelParameters& params, const Grid& grid);

Matrix2 diffusion_matrix(const Concentrations& c, const ModelParameters& params);

/// h''(u): delta_ij / u_i + 1 / u0. Requires a strictly interior state.
Matrix2 entropy_hessian(const Concentrations& c);

struct QuadraticFormSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the identity  z . h''(u) A(u) z = sum of three nonnegative terms.
/// lhs is the matrix product, rhs the closed-form decomposition.
QuadraticFormSides quadratic_form_sides(const Concentrations& c, const Vector2& z,
                                        const ModelParameters& params);

/// w_i = log(u_i / u0).
Vector2 entropy_variables(const Concentrations& c);

/// u_i = exp(w_i + V_i) / (1 + exp(w_1 + V_1) + exp(w_2 + V_2)).
Concentrations inverse_entropy_variables(const Vector2& w, const Vector2& V = {0.0, 0.0});

/// Nonlinear Robin fluxes given the traces at both ends and the pools.
BoundaryFluxes boundary_fluxes(const Concentrations& at_soma, const Concentrations& at_cone,
                               const PoolState& pools, const ModelParameters& params);

}  // namespace vesicle
