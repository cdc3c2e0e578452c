#pragma once

// Finite-volume discretization of the coupled field + pool system.
//
// Unknown vector layout (size 2m + 2):
//
//     [ u1_0 .. u1_{m-1} | u2_0 .. u2_{m-1} | lambda_n | lambda_s ]
//
// u0 is eliminated as 1 - u1 - u2. Boundary fluxes read the traces from the
// edge cells (cell 0 at the soma, cell m-1 at the growth cone).

#include <span>
#include <vector>

#include "vesicle/banded.hpp"
#include "vesicle/grid.hpp"
#include "vesicle/model.hpp"

namespace vesicle::fv {

class UnknownLayout {
public:
    explicit UnknownLayout(const Grid& grid) : m_(grid.cells()) {}

    int size() const { return 2 * m_ + 2; }
    int cells() const { return m_; }
    int u1(int cell) const { return cell; }
    int u2(int cell) const { return m_ + cell; }
    int of(Species s, int cell) const { return s == Species::anterograde ? u1(cell) : u2(cell); }
    int lambda_n() const { return 2 * m_; }
    int lambda_s() const { return 2 * m_ + 1; }

private:
    int m_;
};

struct Unpacked {
    FieldState field;
    PoolState pools;
};

std::vector<double> pack(const FieldState& field, const PoolState& pools);
Unpacked unpack(std::span<const double> y, const Grid& grid);

/// Flux of species `s` through interior face `face` (1..m-1), positive in +x:
///     -(D/h)(u0bar * du - ubar * du0) + D * u0bar * ubar * dV/dx.
double face_flux(Species s, int face, const FieldState& field, const ModelParameters& params,
                 const Grid& grid);

/// Robin fluxes with traces from the edge cells of `y`. No admissibility check.
BoundaryFluxes boundary_fluxes(std::span<const double> y, const ModelParameters& params,
                               const Grid& grid);

/// Fluxes of species `s` at all m + 1 faces: Robin values at faces 0 and m,
/// face_flux in between.
std::vector<double> all_face_fluxes(Species s, std::span<const double> y,
                                    const ModelParameters& params, const Grid& grid);

/// Fully implicit Euler residual. Field rows:
///     u_new - u_old + (tau/h)(J_{j+1/2} - J_{j-1/2});
/// pool rows:
///     lambda_n_new - lambda_n_old - tau (J1_1 + J2_1),
///     lambda_s_new - lambda_s_old + tau (J1_0 + J2_0).
std::vector<double> assemble_residual(std::span<const double> y_new,
                                      std::span<const double> y_old,
                                      const ModelParameters& params, const Grid& grid, double tau);

/// Analytic Jacobian of assemble_residual with respect to y_new. Stored as a
/// banded core over interleaved (u1_j, u2_j) pairs plus a two-wide pool border;
/// indexing and solve() use the public unknown layout.
class Jacobian {
public:
    explicit Jacobian(const Grid& grid);

    int size() const { return layout_.size(); }
    double operator()(int row, int col) const;
    bool in_pattern(int row, int col) const;
    void add(int row, int col, double value);
    std::vector<double> solve(std::span<const double> rhs) const;

    const BorderedBandMatrix& matrix() const { return matrix_; }

private:
    int internal(int index) const;
    int external(int index) const;

    UnknownLayout layout_;
    BorderedBandMatrix matrix_;
};

Jacobian assemble_jacobian(std::span<const double> y_new, const ModelParameters& params,
                           const Grid& grid, double tau);

}  // namespace vesicle::fv
