#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vesicle/banded.hpp"
#include "vesicle/errors.hpp"
#include "vesicle/fv.hpp"
#include "vesicle/newton.hpp"

using namespace vesicle;

namespace {

// Dense matrix stand-in for the Jacobian concept.
struct Dense {
    std::vector<double> a;
    int n;
    std::vector<double> solve(std::span<const double> r) const {
        auto m = a;
        std::vector<double> b(r.begin(), r.end());
        dense_solve(m, b, n);
        return b;
    }
};

}  // namespace

TEST_CASE("damping schedule") {
    newton::NewtonConfig cfg;
    CHECK(newton::damping_factor(0, 0.5, cfg) == 1.0);
    CHECK(newton::damping_factor(1, 0.5, cfg) == doctest::Approx(0.594604).epsilon(1e-6));
    CHECK(newton::damping_factor(3, 0.5, cfg) == doctest::Approx(0.353553).epsilon(1e-6));
    CHECK(newton::damping_factor(0, 4.0, cfg) == doctest::Approx(0.25));
    CHECK(newton::damping_factor(1, 2.0, cfg) == doctest::Approx(0.594604 / 2).epsilon(1e-6));

    cfg.damping_mode = newton::DampingMode::paper_normalized;
    CHECK(newton::damping_factor(0, 0.5, cfg) == doctest::Approx(2.0));
    CHECK(newton::damping_factor(3, 4.0, cfg) == doctest::Approx(0.353553 / 4).epsilon(1e-6));
    CHECK(newton::damping_factor(2, 0.0, cfg) == 0.0);
}

TEST_CASE("config validation") {
    newton::NewtonConfig cfg;
    CHECK(cfg.tol == 1e-3);
    CHECK(cfg.damping_exponent == 0.75);
    CHECK_NOTHROW(cfg.validate());
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("affine residual converges in one full step") {
    const std::vector<double> c{0.3, -0.2, 0.5};
    auto residual = [&](std::span<const double> y) {
        std::vector<double> r(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] - c[i];
        return r;
    };
    auto jacobian = [](std::span<const double>) { return Dense{{1, 0, 0, 0, 1, 0, 0, 0, 1}, 3}; };
    newton::NewtonConfig cfg;
    cfg.tol = 1e-14;
    const auto res = newton::newton_solve(residual, jacobian, {0.0, 0.0, 0.0}, cfg);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    CHECK(res.report.step_norms.size() == 1);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(res.y[i] == doctest::Approx(c[i]));
    CHECK(res.report.final_residual_norm < cfg.tol);
}

TEST_CASE("affine residual with large increment converges from any start") {
    // y - c with |y0 - c| = 10: the first step is capped to unit length.
    const std::vector<double> A{2.0, 1.0, 0.5, 3.0};
    const std::vector<double> c{1.0, -2.0};
    auto residual = [&](std::span<const double> y) {
        return std::vector<double>{A[0] * y[0] + A[1] * y[1] - c[0],
                                   A[2] * y[0] + A[3] * y[1] - c[1]};
    };
    auto jacobian = [&](std::span<const double>) { return Dense{A, 2}; };
    newton::NewtonConfig cfg;
    cfg.tol = 1e-8;
    cfg.max_iter = 100000;
    const auto res = newton::newton_solve(residual, jacobian, {10.0, -10.0}, cfg);
    CHECK(res.report.converged);
    CHECK(res.report.step_norms.front() > 1.0);
    CHECK(newton::max_norm(residual(res.y)) < cfg.tol);
}

TEST_CASE("non-convergence carries the report") {
    auto residual = [](std::span<const double> y) { return std::vector<double>{y[0] * y[0] + 1}; };
    auto jacobian = [](std::span<const double> y) { return Dense{{2 * y[0] + 1e-3}, 1}; };
    newton::NewtonConfig cfg;
    cfg.max_iter = 7;
    try {
        newton::newton_solve(residual, jacobian, {1.0}, cfg);
        FAIL("expected NonConvergenceError");
    } catch (const newton::NonConvergenceError& e) {
        CHECK(e.report().iterations == 7);
        CHECK(!e.report().converged);
        CHECK(e.report().step_norms.size() == 7);
    }
}

TEST_CASE("non-finite residual aborts") {
    auto residual = [](std::span<const double> y) {
        return std::vector<double>{y[0] > 0.5 ? NAN : y[0] - 1.0};
    };
    auto jacobian = [](std::span<const double>) { return Dense{{1.0}, 1}; };
    CHECK_THROWS_AS(newton::newton_solve(residual, jacobian, {0.0}, {}),
                    newton::NonConvergenceError);
}

TEST_CASE("singular Jacobian propagates") {
    auto residual = [](std::span<const double> y) { return std::vector<double>{y[0] - 1.0}; };
    auto jacobian = [](std::span<const double>) { return Dense{{0.0}, 1}; };
    CHECK_THROWS_AS(newton::newton_solve(residual, jacobian, {0.0}, {}), SingularMatrixError);
}

TEST_CASE("deterministic iterates") {
    const Grid g(20);
    const auto p = testing::table_params();
    const auto y0 = fv::pack(FieldState::uniform(g, 0.1, 0.1), {0.0015, 0.12});
    newton::NewtonConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 2000;
    auto solve = [&] {
        return newton::newton_solve(
            [&](std::span<const double> y) { return fv::assemble_residual(y, y0, p, g, 1e-3); },
            [&](std::span<const double> y) { return fv::assemble_jacobian(y, p, g, 1e-3); }, y0,
            cfg);
    };
    const auto a = solve();
    const auto b = solve();
    CHECK(a.y == b.y);
    CHECK(a.report.step_norms == b.report.step_norms);
}

TEST_CASE("first implicit Euler step of experiment 1") {
    // h = 0.01, tau = 1e-3, tol = 1e-10, starting from the previous state.
    const Grid g(100);
    const auto p = testing::table_params();
    const auto y0 = fv::pack(FieldState::uniform(g, 0.1, 0.1), {0.0015, 0.12});
    newton::NewtonConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 5000;
    const auto res = newton::newton_solve(
        [&](std::span<const double> y) { return fv::assemble_residual(y, y0, p, g, 1e-3); },
        [&](std::span<const double> y) { return fv::assemble_jacobian(y, p, g, 1e-3); }, y0, cfg);
    CHECK(res.report.converged);
    // Regression pin, measured once with the default damping schedule.
    CHECK(res.report.iterations == 158);
}

TEST_CASE("banded LU against dense elimination") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int n = 15, kl = 3, ku = 2, k = 2;
    BorderedBandMatrix M(n, kl, ku, k);
    std::vector<double> dense(static_cast<std::size_t>((n + k) * (n + k)), 0.0);
    for (int r = 0; r < n + k; ++r) {
        for (int c = 0; c < n + k; ++c) {
            if (!M.in_pattern(r, c)) continue;
            // Weak diagonal forces row interchanges.
            const double v = r == c ? 0.1 * U(rng) : U(rng);
            M.add(r, c, v);
            dense[static_cast<std::size_t>(r * (n + k) + c)] = v;
        }
    }
    CHECK_THROWS_AS(M.add(0, 5, 1.0), std::out_of_range);
    std::vector<double> b(static_cast<std::size_t>(n + k));
    for (double& v : b) v = U(rng);
    auto x_ref = b;
    dense_solve(dense, x_ref, n + k);
    const auto x = M.solve(b);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(x_ref[i]).epsilon(1e-10));
}

TEST_CASE("singular banded matrix is reported") {
    BorderedBandMatrix M(4, 1, 1, 0);
    M.add(0, 0, 1.0);
    M.add(1, 1, 1.0);
    M.add(3, 3, 1.0);
    CHECK_THROWS_AS(M.solve(std::vector<double>(4, 1.0)), SingularMatrixError);
}
