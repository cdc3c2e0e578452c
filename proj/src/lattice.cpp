#include "vesicle/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vesicle/errors.hpp"

namespace vesicle::lattice {

namespace {

constexpr double kSlack = 1e-12;

void check_state(const LatticeState& s, const LatticeModel& model, double slack) {
    if (s.u2.size() != s.u1.size() || s.u1.size() < 2) {
        throw DomainError("lattice: need at least two sites and equal species lengths");
    }
    for (std::size_t j = 0; j < s.sites(); ++j) {
        const double a = s.u1[j];
        const double b = s.u2[j];
        if (!std::isfinite(a) || !std::isfinite(b) || a < -slack || b < -slack ||
            a + b > 1.0 + slack) {
            std::ostringstream os;
            os.precision(17);
            os << "lattice site " << j << " inadmissible: u1=" << a << " u2=" << b;
            throw DomainError(os.str());
        }
    }
    if (s.lambda_n < -slack || s.lambda_n > model.lambda_n_max + slack || s.lambda_s < -slack ||
        s.lambda_s > model.lambda_s_max + slack) {
        throw DomainError("lattice pools outside capacity");
    }
}

void bulk_exchange(const std::vector<double>& u, const std::vector<double>& u0,
                   const std::vector<double>& V, double eta, double scale,
                   std::vector<double>& du) {
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        const double dV = V[j + 1] - V[j];
        const double right = u[j] * u0[j + 1] * std::exp(eta * dV);
        const double left = u[j + 1] * u0[j] * std::exp(-eta * dV);
        const double net = scale * (right - left);
        du[j] -= net;
        du[j + 1] += net;
    }
}

void axpy(LatticeState& y, double a, const LatticeState& x) {
    for (std::size_t j = 0; j < y.sites(); ++j) {
        y.u1[j] += a * x.u1[j];
        y.u2[j] += a * x.u2[j];
    }
    y.lambda_n += a * x.lambda_n;
    y.lambda_s += a * x.lambda_s;
}

}  // namespace

LatticeModel LatticeModel::from_continuum(const ModelParameters& p) {
    p.validate();
    LatticeModel m;
    m.gamma1 = 1.0 / p.D1;
    m.gamma2 = 1.0 / p.D2;
    m.a1 = p.alpha1 / p.D1;
    m.a2 = p.alpha2 / p.D2;
    m.b1 = p.beta1 / p.D1;
    m.b2 = p.beta2 / p.D2;
    m.lambda_n_max = p.lambda_n_max;
    m.lambda_s_max = p.lambda_s_max;
    return m;
}

void LatticeModel::validate() const {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) throw DomainError("lattice: gamma must be > 0");
    if (!(a1 >= 0.0 && a2 >= 0.0 && b1 >= 0.0 && b2 >= 0.0)) {
        throw DomainError("lattice: reservoir rates must be >= 0");
    }
    if (!(lambda_n_max > 0.0) || !(lambda_s_max > 0.0)) {
        throw DomainError("lattice: capacities must be > 0");
    }
}

double LatticeState::total(double h) const {
    double s = 0.0;
    for (std::size_t j = 0; j < sites(); ++j) s += u1[j] + u2[j];
    return h * s + lambda_n + lambda_s;
}

SitePotentials SitePotentials::sample(const ModelParameters& params, int sites) {
    const Grid grid(sites);
    SitePotentials p;
    for (int j = 0; j < sites; ++j) {
        p.V1.push_back(params.V1.value_at_cell(j, grid));
        p.V2.push_back(params.V2.value_at_cell(j, grid));
    }
    return p;
}

LatticeState lattice_rhs(const LatticeState& state, const LatticeModel& model, double h,
                         const SitePotentials& potentials) {
    model.validate();
    check_state(state, model, kSlack);
    const std::size_t m = state.sites();
    if (potentials.V1.size() != m || potentials.V2.size() != m) {
        throw DomainError("lattice: potentials do not match site count");
    }
    if (std::abs(h * static_cast<double>(m) - 1.0) > 1e-12) {
        throw DomainError("lattice: h must equal 1 / sites");
    }

    std::vector<double> u0(m);
    for (std::size_t j = 0; j < m; ++j) u0[j] = 1.0 - state.u1[j] - state.u2[j];

    LatticeState d;
    d.u1.assign(m, 0.0);
    d.u2.assign(m, 0.0);
    bulk_exchange(state.u1, u0, potentials.V1, model.eta1, 1.0 / (model.gamma1 * h * h), d.u1);
    bulk_exchange(state.u2, u0, potentials.V2, model.eta2, 1.0 / (model.gamma2 * h * h), d.u2);

    // Reservoir rates as fluxes (per unit time per unit cross-section).
    const double fill_s = state.lambda_s / model.lambda_s_max;
    const double fill_n = state.lambda_n / model.lambda_n_max;
    const std::size_t last = m - 1;
    const double in1 = model.a1 * fill_s * u0[0] / model.gamma1;
    const double out2 = model.b2 * (1.0 - fill_s) * u0[0] * state.u2[0] / model.gamma2;
    const double out1 = model.b1 * (1.0 - fill_n) * u0[last] * state.u1[last] / model.gamma1;
    const double in2 = model.a2 * fill_n * u0[last] / model.gamma2;

    d.u1[0] += in1 / h;
    d.u2[0] -= out2 / h;
    d.u1[last] -= out1 / h;
    d.u2[last] += in2 / h;
    d.lambda_s = out2 - in1;
    d.lambda_n = out1 - in2;
    return d;
}

double stable_dt(const LatticeModel& model, double h, double safety) {
    return safety * std::min(model.gamma1, model.gamma2) * h * h / 4.0;
}

LatticeState lattice_integrate(const LatticeState& state0, const LatticeModel& model,
                               double t_end, double dt, double h,
                               const SitePotentials& potentials, Integrator integrator) {
    model.validate();
    check_state(state0, model, kSlack);
    if (!(dt > 0.0) || !(t_end >= 0.0)) {
        throw DomainError("lattice_integrate: need dt > 0 and t_end >= 0");
    }
    if (dt > stable_dt(model, h)) {
        std::ostringstream os;
        os << "lattice_integrate: dt=" << dt << " exceeds stability bound " << stable_dt(model, h);
        throw DomainError(os.str());
    }

    LatticeState y = state0;
    double t = 0.0;
    long step = 0;
    while (t < t_end) {
        const double step_dt = std::min(dt, t_end - t);
        ++step;
        if (integrator == Integrator::explicit_euler) {
            axpy(y, step_dt, lattice_rhs(y, model, h, potentials));
        } else {
            LatticeState mid = y;
            axpy(mid, 0.5 * step_dt, lattice_rhs(y, model, h, potentials));
            try {
                check_state(mid, model, kSlack);
            } catch (const DomainError& e) {
                throw LatticeInstability("lattice step " + std::to_string(step) +
                                             " (midpoint stage): " + e.what(),
                                         step);
            }
            axpy(y, step_dt, lattice_rhs(mid, model, h, potentials));
        }
        try {
            check_state(y, model, kSlack);
        } catch (const DomainError& e) {
            throw LatticeInstability("lattice step " + std::to_string(step) + ": " + e.what(),
                                     step);
        }
        t = (t_end - t <= dt) ? t_end : t + step_dt;
    }
    return y;
}

}  // namespace vesicle::lattice
