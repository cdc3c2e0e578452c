#include "vesicle/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vesicle/fv.hpp"
#include "vesicle/lattice.hpp"
#include "vesicle/model.hpp"

namespace vesicle::invariants {

namespace {

using Rng = std::mt19937_64;

Concentrations interior(Rng& rng, double margin) {
    std::uniform_real_distribution<double> U(margin, 1.0 - margin);
    while (true) {
        const double a = U(rng), b = U(rng);
        if (a + b < 1.0 - margin) return {a, b};
    }
}

ModelParameters random_parameters(Rng& rng, int cells) {
    std::uniform_real_distribution<double> rate(0.0, 3.0);
    std::uniform_real_distribution<double> diff(0.01, 2.0);
    std::uniform_real_distribution<double> cap(0.01, 1.0);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    ModelParameters p;
    p.alpha1 = rate(rng);
    p.alpha2 = rate(rng);
    p.beta1 = rate(rng);
    p.beta2 = rate(rng);
    p.D1 = diff(rng);
    p.D2 = diff(rng);
    p.lambda_n_max = cap(rng);
    p.lambda_s_max = cap(rng);
    p.V1 = PotentialSpec::linear(slope(rng));
    std::vector<double> table(static_cast<std::size_t>(cells + 1));
    for (double& s : table) s = slope(rng);
    p.V2 = PotentialSpec::tabulated(std::move(table));
    return p;
}

std::vector<double> random_state(Rng& rng, const Grid& grid, const ModelParameters& p) {
    FieldState f = FieldState::uniform(grid, 0.0, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const auto c = interior(rng, 0.01);
        f.u1[j] = c.u1;
        f.u2[j] = c.u2;
    }
    std::uniform_real_distribution<double> fill(0.05, 0.95);
    return fv::pack(f, {fill(rng) * p.lambda_n_max, fill(rng) * p.lambda_s_max});
}

PropertyResult finish(std::string name, double measured, double bound, int samples) {
    return {std::move(name), measured <= bound, measured, bound, samples};
}

}  // namespace

PropertyResult quadratic_form_identity(int samples, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> z(-1.0, 1.0);
    std::uniform_real_distribution<double> diff(0.01, 5.0);
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        ModelParameters p;
        p.D1 = diff(rng);
        p.D2 = diff(rng);
        const auto s = quadratic_form_sides(interior(rng, 1e-3), {z(rng), z(rng)}, p);
        const double scale = std::max(std::abs(s.lhs), std::abs(s.rhs));
        if (scale > 0.0) worst = std::max(worst, std::abs(s.lhs - s.rhs) / scale);
    }
    return finish("quadratic_form_identity", worst, 1e-12, samples);
}

PropertyResult jacobian_vs_fd(int cells, int states, std::uint64_t seed, double bound) {
    Rng rng(seed);
    const Grid grid(cells);
    const double tau = 0.01;
    const double step = 1e-6;
    double worst = 0.0;
    for (int s = 0; s < states; ++s) {
        const ModelParameters p = random_parameters(rng, cells);
        const auto y = random_state(rng, grid, p);
        const auto J = fv::assemble_jacobian(y, p, grid, tau);
        for (int c = 0; c < J.size(); ++c) {
            auto yp = y, ym = y;
            yp[static_cast<std::size_t>(c)] += step;
            ym[static_cast<std::size_t>(c)] -= step;
            // y_old = y keeps the residual small, so differencing loses few digits.
            const auto Rp = fv::assemble_residual(yp, y, p, grid, tau);
            const auto Rm = fv::assemble_residual(ym, y, p, grid, tau);
            for (int r = 0; r < J.size(); ++r) {
                const double fd =
                    (Rp[static_cast<std::size_t>(r)] - Rm[static_cast<std::size_t>(r)]) / (2 * step);
                const double a = J(r, c);
                const double scale = std::max({std::abs(a), std::abs(fd), 1e-9});
                worst = std::max(worst, std::abs(a - fd) / scale);
            }
        }
    }
    return finish("jacobian_vs_fd", worst, bound, states);
}

PropertyResult conservation_telescoping(int samples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        const int m = 3 + n % 40;
        const Grid g(m);
        const ModelParameters p = random_parameters(rng, m);
        const auto y = random_state(rng, g, p);
        const auto y0 = random_state(rng, g, p);
        const auto R = fv::assemble_residual(y, y0, p, g, 0.05);
        double weighted = 0.0, change = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(2 * m); ++i) {
            weighted += g.width() * R[i];
            change += g.width() * (y[i] - y0[i]);
        }
        for (std::size_t i = static_cast<std::size_t>(2 * m); i < y.size(); ++i) {
            weighted += R[i];
            change += y[i] - y0[i];
        }
        worst = std::max(worst, std::abs(weighted - change));
    }
    return finish("conservation_telescoping", worst, 1e-13, samples);
}

PropertyResult entropy_round_trip(int samples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        const auto c = interior(rng, 1e-3);
        const auto back = inverse_entropy_variables(entropy_variables(c));
        worst = std::max({worst, std::abs(back.u1 - c.u1), std::abs(back.u2 - c.u2)});
    }
    return finish("entropy_round_trip", worst, 1e-12, samples);
}

PropertyResult lattice_conservation(int samples, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        const int m = 2 + n % 30;
        const double h = 1.0 / m;
        const ModelParameters p = random_parameters(rng, m);
        const auto model = lattice::LatticeModel::from_continuum(p);
        const auto y = random_state(rng, Grid(m), p);
        const auto parts = fv::unpack(y, Grid(m));
        const lattice::LatticeState s{parts.field.u1, parts.field.u2, parts.pools.lambda_n,
                                      parts.pools.lambda_s};
        const auto d = lattice::lattice_rhs(s, model, h, lattice::SitePotentials::sample(p, m));
        double sum = d.lambda_n + d.lambda_s;
        double scale = std::abs(d.lambda_n) + std::abs(d.lambda_s);
        for (std::size_t j = 0; j < d.sites(); ++j) {
            sum += h * (d.u1[j] + d.u2[j]);
            scale += h * (std::abs(d.u1[j]) + std::abs(d.u2[j]));
        }
        worst = std::max(worst, std::abs(sum) / (1.0 + scale));
    }
    return finish("lattice_conservation", worst, 1e-13, samples);
}

std::vector<PropertyResult> run_all() {
    return {quadratic_form_identity(), jacobian_vs_fd(), conservation_telescoping(),
            entropy_round_trip(), lattice_conservation()};
}

}  // namespace vesicle::invariants
