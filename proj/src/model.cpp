#include "vesicle/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vesicle/errors.hpp"
#include "vesicle/robin.hpp"

namespace vesicle {

namespace {

double xlogx_minus_x(double u) {
    // 0 log 0 := 0
    return u > 0.0 ? u * (std::log(u) - 1.0) : 0.0;
}

void require_interior(const Concentrations& c, const char* what) {
    check_admissible(c);
    if (!(c.u1 > 0.0 && c.u2 > 0.0 && c.u0() > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << what << " needs a strictly interior state, got u1=" << c.u1 << " u2=" << c.u2;
        throw SingularStateError(os.str());
    }
}

}  // namespace

PotentialSpec PotentialSpec::linear(double slope) {
    PotentialSpec p;
    p.slope_ = slope;
    return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> face_slopes) {
    if (face_slopes.size() < 3) {
        throw DomainError("tabulated potential needs one slope per face (at least 3)");
    }
    PotentialSpec p;
    p.face_slopes_ = std::move(face_slopes);
    return p;
}

double PotentialSpec::slope_at_face(int face, const Grid& grid) const {
    if (!is_tabulated()) {
        return slope_;
    }
    if (static_cast<int>(face_slopes_.size()) != grid.faces()) {
        throw DomainError("tabulated potential has " + std::to_string(face_slopes_.size()) +
                          " face slopes, grid has " + std::to_string(grid.faces()) + " faces");
    }
    return face_slopes_.at(static_cast<std::size_t>(face));
}

double PotentialSpec::value_at_cell(int cell, const Grid& grid) const {
    if (!is_tabulated()) {
        return slope_ * grid.center(cell);
    }
    const double h = grid.width();
    // Half cell from each face of the path: face 0 -> center 0, then full cells.
    double v = 0.5 * h * slope_at_face(0, grid);
    for (int f = 1; f <= cell; ++f) {
        v += h * slope_at_face(f, grid);
    }
    return v;
}

PotentialSpec PotentialSpec::reflected() const {
    if (!is_tabulated()) {
        return linear(-slope_);
    }
    std::vector<double> r(face_slopes_.rbegin(), face_slopes_.rend());
    for (double& s : r) {
        s = -s;
    }
    return tabulated(std::move(r));
}

void ModelParameters::validate() const {
    auto fail = [](const std::string& msg) { throw DomainError("model parameters: " + msg); };
    if (!(D1 > 0.0) || !(D2 > 0.0)) fail("diffusivities must be > 0");
    if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || !(beta1 >= 0.0) || !(beta2 >= 0.0)) {
        fail("rate constants must be >= 0");
    }
    if (!(lambda_n_max > 0.0) || !(lambda_s_max > 0.0)) fail("pool capacities must be > 0");
}

void check_admissible(const Concentrations& c, double slack) {
    if (!std::isfinite(c.u1) || !std::isfinite(c.u2) || c.u1 < -slack || c.u2 < -slack ||
        c.u1 + c.u2 > 1.0 + slack) {
        std::ostringstream os;
        os.precision(17);
        os << "inadmissible concentrations u1=" << c.u1 << " u2=" << c.u2;
        throw DomainError(os.str());
    }
}

void check_admissible(const PoolState& pools, const ModelParameters& params, double slack) {
    const bool ok_n = pools.lambda_n >= -slack && pools.lambda_n <= params.lambda_n_max + slack;
    const bool ok_s = pools.lambda_s >= -slack && pools.lambda_s <= params.lambda_s_max + slack;
    if (!ok_n || !ok_s) {
        std::ostringstream os;
        os.precision(17);
        os << "pool outside capacity: lambda_n=" << pools.lambda_n << " (max "
           << params.lambda_n_max << "), lambda_s=" << pools.lambda_s << " (max "
           << params.lambda_s_max << ")";
        throw DomainError(os.str());
    }
}

double entropy_density(const Concentrations& c) {
    check_admissible(c);
    // Rounding can leave u0 at -1e-17 for u1 + u2 == 1.
    const double u0 = std::max(0.0, c.u0());
    return xlogx_minus_x(c.u1) + xlogx_minus_x(c.u2) + xlogx_minus_x(u0);
}

double free_energy(const FieldState& field, const ModelParameters& params, const Grid& grid) {
    const auto m = static_cast<std::size_t>(grid.cells());
    if (field.u1.size() != m || field.u2.size() != m) {
        throw DomainError("free_energy: field size does not match grid");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const int cell = static_cast<int>(j);
        sum += entropy_density({field.u1[j], field.u2[j]}) -
               field.u1[j] * params.V1.value_at_cell(cell, grid) -
               field.u2[j] * params.V2.value_at_cell(cell, grid);
    }
    return grid.width() * sum;
}

Matrix2 diffusion_matrix(const Concentrations& c, const ModelParameters& params) {
    check_admissible(c);
    return {{{params.D1 * (1.0 - c.u2), params.D1 * c.u1},
             {params.D2 * c.u2, params.D2 * (1.0 - c.u1)}}};
}

Matrix2 entropy_hessian(const Concentrations& c) {
    require_interior(c, "entropy_hessian");
    const double inv0 = 1.0 / c.u0();
    return {{{1.0 / c.u1 + inv0, inv0}, {inv0, 1.0 / c.u2 + inv0}}};
}

QuadraticFormSides quadratic_form_sides(const Concentrations& c, const Vector2& z,
                                        const ModelParameters& params) {
    const Matrix2 H = entropy_hessian(c);
    const Matrix2 A = diffusion_matrix(c, params);

    double lhs = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            double HA = 0.0;
            for (int l = 0; l < 2; ++l) {
                HA += H[i][l] * A[l][k];
            }
            lhs += z[i] * HA * z[k];
        }
    }

    const double u0 = c.u0();
    const double dmin = std::min(params.D1, params.D2);
    const double zs = z[0] + z[1];
    double rhs = dmin * u0 * (z[0] * z[0] / c.u1 + z[1] * z[1] / c.u2) +
                 dmin * (1.0 / u0 + 1.0) * zs * zs;
    // The excess diffusivity couples through the slower species' direction.
    if (params.D2 >= params.D1) {
        const double q = c.u2 * z[0] + (1.0 - c.u1) * z[1];
        rhs += (params.D2 - params.D1) * q * q / (c.u2 * u0);
    } else {
        const double q = c.u1 * z[1] + (1.0 - c.u2) * z[0];
        rhs += (params.D1 - params.D2) * q * q / (c.u1 * u0);
    }
    return {lhs, rhs};
}

Vector2 entropy_variables(const Concentrations& c) {
    require_interior(c, "entropy_variables");
    const double u0 = c.u0();
    return {std::log(c.u1 / u0), std::log(c.u2 / u0)};
}

Concentrations inverse_entropy_variables(const Vector2& w, const Vector2& V) {
    const double t1 = w[0] + V[0];
    const double t2 = w[1] + V[1];
    if (!std::isfinite(t1) || !std::isfinite(t2)) {
        throw DomainError("inverse_entropy_variables: non-finite input");
    }
    // Softmax over (0, t1, t2), shifted by the maximum to avoid overflow.
    const double top = std::max({0.0, t1, t2});
    const double e0 = std::exp(-top);
    const double e1 = std::exp(t1 - top);
    const double e2 = std::exp(t2 - top);
    const double denom = e0 + e1 + e2;
    const double u1 = e1 / denom;
    double u2 = e2 / denom;
    // When u0 is below the rounding of u1 + u2 near 1, keep the closure exact.
    if (u1 + u2 > 1.0) u2 = 1.0 - u1;
    return {u1, u2};
}

BoundaryFluxes boundary_fluxes(const Concentrations& at_soma, const Concentrations& at_cone,
                               const PoolState& pools, const ModelParameters& params) {
    check_admissible(at_soma);
    check_admissible(at_cone);
    check_admissible(pools, params);
    return detail::robin_fluxes(at_soma.u1, at_soma.u2, at_cone.u1, at_cone.u2, pools.lambda_n,
                                pools.lambda_s, params);
}

}  // namespace vesicle
