#include "vesicle/fv.hpp"

#include <cmath>
#include <string>

#include "vesicle/errors.hpp"
#include "vesicle/robin.hpp"

namespace vesicle::fv {

namespace {

// Flux between cells L and R of species value u with companion species v.
struct FaceKernel {
    double flux;
    double du_left, dv_left, du_right, dv_right;
};

FaceKernel face_kernel(double uL, double vL, double uR, double vR, double D, double slope,
                       double h) {
    const double u0L = 1.0 - uL - vL;
    const double u0R = 1.0 - uR - vR;
    // u0bar * (uR - uL) - ubar * (u0R - u0L) collapses to u0L uR - u0R uL.
    const double g = u0L * uR - u0R * uL;
    const double u0bar = 0.5 * (u0L + u0R);
    const double ubar = 0.5 * (uL + uR);
    const double drift = u0bar * ubar;

    FaceKernel k;
    k.flux = -(D / h) * g + D * slope * drift;
    const double dg_uL = -uR - u0R;
    const double dg_vL = -uR;
    const double dg_uR = u0L + uL;
    const double dg_vR = uL;
    const double dd_u = 0.5 * (u0bar - ubar);
    const double dd_v = -0.5 * ubar;
    k.du_left = -(D / h) * dg_uL + D * slope * dd_u;
    k.dv_left = -(D / h) * dg_vL + D * slope * dd_v;
    k.du_right = -(D / h) * dg_uR + D * slope * dd_u;
    k.dv_right = -(D / h) * dg_vR + D * slope * dd_v;
    return k;
}

void check_size(std::span<const double> y, const Grid& grid, const char* what) {
    const UnknownLayout layout(grid);
    if (static_cast<int>(y.size()) != layout.size()) {
        throw DomainError(std::string(what) + ": unknown vector has " + std::to_string(y.size()) +
                          " entries, expected " + std::to_string(layout.size()));
    }
}

Species other(Species s) {
    return s == Species::anterograde ? Species::retrograde : Species::anterograde;
}

}  // namespace

std::vector<double> pack(const FieldState& field, const PoolState& pools) {
    const std::size_t m = field.u1.size();
    if (field.u2.size() != m) {
        throw DomainError("pack: u1 and u2 differ in length");
    }
    std::vector<double> y;
    y.reserve(2 * m + 2);
    y.insert(y.end(), field.u1.begin(), field.u1.end());
    y.insert(y.end(), field.u2.begin(), field.u2.end());
    y.push_back(pools.lambda_n);
    y.push_back(pools.lambda_s);
    return y;
}

Unpacked unpack(std::span<const double> y, const Grid& grid) {
    check_size(y, grid, "unpack");
    const auto m = static_cast<std::size_t>(grid.cells());
    Unpacked out;
    out.field.u1.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
    out.field.u2.assign(y.begin() + static_cast<std::ptrdiff_t>(m),
                        y.begin() + static_cast<std::ptrdiff_t>(2 * m));
    out.pools = {y[2 * m], y[2 * m + 1]};
    return out;
}

double face_flux(Species s, int face, const FieldState& field, const ModelParameters& params,
                 const Grid& grid) {
    const int m = grid.cells();
    if (face < 1 || face > m - 1) {
        throw DomainError("face_flux: face " + std::to_string(face) +
                          " is not interior (boundary faces use boundary_fluxes)");
    }
    if (static_cast<int>(field.u1.size()) != m || static_cast<int>(field.u2.size()) != m) {
        throw DomainError("face_flux: field size does not match grid");
    }
    const auto& u = s == Species::anterograde ? field.u1 : field.u2;
    const auto& v = s == Species::anterograde ? field.u2 : field.u1;
    const auto L = static_cast<std::size_t>(face - 1);
    const auto R = static_cast<std::size_t>(face);
    return face_kernel(u[L], v[L], u[R], v[R], params.diffusivity(s),
                       params.potential(s).slope_at_face(face, grid), grid.width())
        .flux;
}

BoundaryFluxes boundary_fluxes(std::span<const double> y, const ModelParameters& params,
                               const Grid& grid) {
    check_size(y, grid, "boundary_fluxes");
    const UnknownLayout L(grid);
    const int last = grid.cells() - 1;
    return detail::robin_fluxes(y[L.u1(0)], y[L.u2(0)], y[L.u1(last)], y[L.u2(last)],
                                y[L.lambda_n()], y[L.lambda_s()], params);
}

std::vector<double> all_face_fluxes(Species s, std::span<const double> y,
                                    const ModelParameters& params, const Grid& grid) {
    check_size(y, grid, "all_face_fluxes");
    const UnknownLayout L(grid);
    const int m = grid.cells();
    const BoundaryFluxes b = boundary_fluxes(y, params, grid);
    std::vector<double> out(static_cast<std::size_t>(m + 1));
    const bool first = s == Species::anterograde;
    out.front() = first ? b.j1_0 : b.j2_0;
    out.back() = first ? b.j1_1 : b.j2_1;
    const double D = params.diffusivity(s);
    for (int f = 1; f < m; ++f) {
        out[static_cast<std::size_t>(f)] =
            face_kernel(y[L.of(s, f - 1)], y[L.of(other(s), f - 1)], y[L.of(s, f)],
                        y[L.of(other(s), f)], D, params.potential(s).slope_at_face(f, grid),
                        grid.width())
                .flux;
    }
    return out;
}

std::vector<double> assemble_residual(std::span<const double> y_new,
                                      std::span<const double> y_old,
                                      const ModelParameters& params, const Grid& grid,
                                      double tau) {
    if (!(tau > 0.0)) {
        throw DomainError("assemble_residual: tau must be > 0");
    }
    check_size(y_new, grid, "assemble_residual");
    check_size(y_old, grid, "assemble_residual");

    const UnknownLayout L(grid);
    const int m = grid.cells();
    const double ratio = tau / grid.width();
    std::vector<double> r(y_new.begin(), y_new.end());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] -= y_old[k];
    }

    for (Species s : kSpecies) {
        const auto flux = all_face_fluxes(s, y_new, params, grid);
        for (int j = 0; j < m; ++j) {
            r[static_cast<std::size_t>(L.of(s, j))] +=
                ratio * (flux[static_cast<std::size_t>(j + 1)] - flux[static_cast<std::size_t>(j)]);
        }
    }
    const BoundaryFluxes b = boundary_fluxes(y_new, params, grid);
    r[static_cast<std::size_t>(L.lambda_n())] -= tau * (b.j1_1 + b.j2_1);
    r[static_cast<std::size_t>(L.lambda_s())] += tau * (b.j1_0 + b.j2_0);
    return r;
}

Jacobian::Jacobian(const Grid& grid)
    : layout_(grid), matrix_(2 * grid.cells(), 3, 3, 2) {}

int Jacobian::internal(int index) const {
    const int m = layout_.cells();
    if (index < m) return 2 * index;
    if (index < 2 * m) return 2 * (index - m) + 1;
    return index;
}

int Jacobian::external(int index) const {
    const int m = layout_.cells();
    if (index >= 2 * m) return index;
    return index % 2 == 0 ? index / 2 : m + index / 2;
}

double Jacobian::operator()(int row, int col) const {
    return matrix_.at(internal(row), internal(col));
}

bool Jacobian::in_pattern(int row, int col) const {
    return matrix_.in_pattern(internal(row), internal(col));
}

void Jacobian::add(int row, int col, double value) {
    matrix_.add(internal(row), internal(col), value);
}

std::vector<double> Jacobian::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != size()) {
        throw DomainError("Jacobian::solve: rhs size mismatch");
    }
    std::vector<double> permuted(rhs.size());
    for (int i = 0; i < size(); ++i) {
        permuted[static_cast<std::size_t>(internal(i))] = rhs[static_cast<std::size_t>(i)];
    }
    const auto x = matrix_.solve(permuted);
    std::vector<double> out(rhs.size());
    for (int i = 0; i < size(); ++i) {
        out[static_cast<std::size_t>(external(i))] = x[static_cast<std::size_t>(i)];
    }
    return out;
}

Jacobian assemble_jacobian(std::span<const double> y_new, const ModelParameters& params,
                           const Grid& grid, double tau) {
    if (!(tau > 0.0)) {
        throw DomainError("assemble_jacobian: tau must be > 0");
    }
    check_size(y_new, grid, "assemble_jacobian");

    const UnknownLayout L(grid);
    const int m = grid.cells();
    const double ratio = tau / grid.width();
    Jacobian J(grid);
    for (int i = 0; i < L.size(); ++i) {
        J.add(i, i, 1.0);
    }

    for (Species s : kSpecies) {
        const Species o = other(s);
        const double D = params.diffusivity(s);
        for (int f = 1; f < m; ++f) {
            const int left = f - 1;
            const int right = f;
            const FaceKernel k =
                face_kernel(y_new[L.of(s, left)], y_new[L.of(o, left)], y_new[L.of(s, right)],
                            y_new[L.of(o, right)], D, params.potential(s).slope_at_face(f, grid),
                            grid.width());
            // Face f enters row `left` with +ratio and row `right` with -ratio.
            for (const auto& [row, sign] : {std::pair{left, 1.0}, std::pair{right, -1.0}}) {
                const int r = L.of(s, row);
                J.add(r, L.of(s, left), sign * ratio * k.du_left);
                J.add(r, L.of(o, left), sign * ratio * k.dv_left);
                J.add(r, L.of(s, right), sign * ratio * k.du_right);
                J.add(r, L.of(o, right), sign * ratio * k.dv_right);
            }
        }
    }

    const int last = m - 1;
    const auto d = detail::robin_partials(y_new[L.u1(0)], y_new[L.u2(0)], y_new[L.u1(last)],
                                          y_new[L.u2(last)], y_new[L.lambda_n()],
                                          y_new[L.lambda_s()], params);

    // Soma face enters cell-0 rows with -ratio, lambda_s row with +tau.
    auto soma = [&](int row, double scale, const detail::FluxPartials& p) {
        J.add(row, L.u1(0), scale * p.du1);
        J.add(row, L.u2(0), scale * p.du2);
        J.add(row, L.lambda_s(), scale * p.dpool);
    };
    soma(L.u1(0), -ratio, d.j1_0);
    soma(L.u2(0), -ratio, d.j2_0);
    soma(L.lambda_s(), tau, d.j1_0);
    soma(L.lambda_s(), tau, d.j2_0);

    // Growth cone face enters cell-(m-1) rows with +ratio, lambda_n row with -tau.
    auto cone = [&](int row, double scale, const detail::FluxPartials& p) {
        J.add(row, L.u1(last), scale * p.du1);
        J.add(row, L.u2(last), scale * p.du2);
        J.add(row, L.lambda_n(), scale * p.dpool);
    };
    cone(L.u1(last), ratio, d.j1_1);
    cone(L.u2(last), ratio, d.j2_1);
    cone(L.lambda_n(), -tau, d.j1_1);
    cone(L.lambda_n(), -tau, d.j2_1);
    return J;
}

}  // namespace vesicle::fv
