#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vesicle/errors.hpp"
#include "vesicle/stationary.hpp"

using namespace vesicle;
using namespace vesicle::stationary;

TEST_CASE("stationary pool values") {
    const auto p = testing::table_params();
    const auto pools = stationary_pool_values(0.1, 0.1, p);
    CHECK(pools.lambda_n == doctest::Approx(0.3 / 0.5666).epsilon(1e-12));
    CHECK(pools.lambda_n == doctest::Approx(0.529474).epsilon(1e-6));
    CHECK(pools.lambda_s == doctest::Approx(0.529474).epsilon(1e-6));
    CHECK(stationary_pool_values(0.0, 0.0, p).lambda_s == 0.0);

    ModelParameters unit;
    unit.alpha1 = unit.alpha2 = unit.beta1 = unit.beta2 = 1.0;
    const auto half = stationary_pool_values(1.0, 1.0, unit);
    CHECK(half.lambda_n == doctest::Approx(0.5));
    CHECK(half.lambda_s == doctest::Approx(0.5));

    auto degenerate = p;
    degenerate.alpha2 = 0.0;
    CHECK_THROWS_AS(stationary_pool_values(0.0, 0.1, degenerate), UndefinedFixedPoint);
    CHECK_NOTHROW(stationary_pool_values(0.1, 0.1, degenerate));
    CHECK_THROWS_AS(stationary_pool_values(-0.1, 0.1, p), DomainError);
}

TEST_CASE("stationary pool values cancel the exchange terms") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        ModelParameters p;
        p.alpha1 = 0.01 + U(rng);
        p.alpha2 = 0.01 + U(rng);
        p.beta1 = 0.01 + 5 * U(rng);
        p.beta2 = 0.01 + 5 * U(rng);
        const double u1 = U(rng), u2 = U(rng);
        const auto f = stationary_pool_values(u1, u2, p);
        CHECK(f.lambda_n >= 0.0);
        CHECK(f.lambda_n < 1.0);
        // Per unit u0 the net exchange at each end vanishes.
        CHECK(std::abs(p.beta1 * (1 - f.lambda_n) * u1 - p.alpha2 * f.lambda_n) <= 1e-14);
        CHECK(std::abs(p.beta2 * (1 - f.lambda_s) * u2 - p.alpha1 * f.lambda_s) <= 1e-14);
    }
}

TEST_CASE("vanishing flux predicate") {
    const auto p = testing::table_params();
    timeloop::SteadySummary s;
    s.u0_at_soma = 0.8;
    s.u0_at_cone = 0.8;

    SUBCASE("all small") {
        const auto r = vanishing_flux_predicate(s, p, 1e-3);
        CHECK(r.consistent);
        CHECK(r.u1_cone_small);
        CHECK(r.u2_soma_small);
        CHECK(r.flux_small);
    }
    SUBCASE("one trace large") {
        s.u1_at_cone = 0.1;
        s.J = 0.2;
        const auto r = vanishing_flux_predicate(s, p, 1e-3);
        CHECK_FALSE(r.consistent);
        CHECK(r.J_cone > 0.0);
        CHECK(r.J_soma == 0.0);
    }
    SUBCASE("all large") {
        s.u1_at_cone = 0.1;
        s.u2_at_soma = 0.05;
        s.J = 0.1;
        CHECK(vanishing_flux_predicate(s, p, 1e-3).consistent);
    }
    SUBCASE("full void trace is rejected") {
        s.u0_at_cone = 1e-4;
        CHECK_THROWS_AS(vanishing_flux_predicate(s, p, 1e-3), DomainError);
    }
}

TEST_CASE("symmetric configuration") {
    SymmetricSetup setup;
    setup.cells = 10;
    setup.V1 = PotentialSpec::linear(1.5);
    setup.lambda0 = 0.3;
    setup.blocks = {{0.1, 0.3, 0.4, 0.1}, {0.5, 0.8, 0.2, 0.0}};
    const auto c = symmetric_config(setup);
    CHECK_NOTHROW(c.validate());
    CHECK(c.params.V2.slope_at_face(0, c.grid) == doctest::Approx(-1.5));
    CHECK(c.params.D1 == c.params.D2);
    CHECK(c.params.alpha1 == c.params.alpha2);
    CHECK(c.params.lambda_n_max == c.params.lambda_s_max);
    CHECK(c.initial.lambda_n0 == c.initial.lambda_s0);
    const auto f = c.initial.build(c.grid);
    CHECK(reflection_defect(f) <= 1e-15);
    CHECK(f.u1[1] == doctest::Approx(0.4));
    CHECK(f.u2[8] == doctest::Approx(0.4));
    // Overlay of the block [0.5, 0.8] with the mirror of [0.1, 0.3].
    CHECK(f.u1[7] == doctest::Approx(0.2 + 0.1));

    SymmetricSetup uniform;
    uniform.cells = 8;
    uniform.background = 0.2;
    const auto fu = symmetric_config(uniform).initial.build(Grid(8));
    for (int j = 0; j < 8; ++j) CHECK(fu.u1[j] == doctest::Approx(0.2));

    SymmetricSetup overfull = setup;
    overfull.blocks = {{0.1, 0.9, 0.6, 0.0}};
    CHECK_THROWS_AS(symmetric_config(overfull).validate(), DomainError);
}

TEST_CASE("short symmetric run stays mirrored") {
    SymmetricSetup setup;
    setup.cells = 20;
    setup.tau = 1e-2;
    setup.t_end = 0.5;
    setup.V1 = PotentialSpec::linear(1.5);
    setup.background = 0.05;
    setup.blocks = {{0.2, 0.4, 0.3, 0.1}};
    setup.lambda0 = 0.2;
    setup.newton.tol = 1e-12;
    setup.newton.max_iter = 2000;
    const auto r = timeloop::run(symmetric_config(setup));
    for (const auto& s : r.snapshots) CHECK(reflection_defect(s) <= 1e-10);
    for (const auto& p : r.pools) CHECK(std::abs(p.lambda_n - p.lambda_s) <= 1e-10);
}

TEST_CASE("reflection defect") {
    FieldState f;
    f.u1 = {0.1, 0.2, 0.3};
    f.u2 = {0.3, 0.2, 0.15};
    CHECK(reflection_defect(f) == doctest::Approx(0.05));
}
