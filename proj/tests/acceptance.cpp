// Acceptance report: one PASS/FAIL line per primary criterion.
//
//   acceptance [--only NAME]... [--expect-fail NAME]...
//
// Exit status is 0 when every criterion passes, or fails only where listed by
// --expect-fail; an expected failure still prints FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "vesicle/convergence.hpp"
#include "vesicle/invariants.hpp"
#include "vesicle/lattice.hpp"
#include "vesicle/stationary.hpp"
#include "vesicle/timeloop.hpp"

using namespace vesicle;
using timeloop::InitialCondition;
using timeloop::SimulationConfig;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParameters table1() {
    ModelParameters p;
    p.alpha1 = p.alpha2 = 0.2666;
    p.beta1 = p.beta2 = 3.0;
    p.D1 = 0.0004;
    p.D2 = 0.004;
    p.lambda_n_max = 0.0029;
    p.lambda_s_max = 0.175;
    p.V1 = PotentialSpec::linear(1.75);
    p.V2 = PotentialSpec::linear(-1.5);
    return p;
}

SimulationConfig exp1(int cells, double tau, double t_end) {
    SimulationConfig c;
    c.grid = Grid(cells);
    c.tau = tau;
    c.t_end = t_end;
    c.params = table1();
    c.initial = InitialCondition::uniform(0.1, 0.1, 0.0015, 0.12);
    c.newton.tol = 1e-10;
    c.newton.max_iter = 5000;
    return c;
}

// Experiment 1 at desk scale, shared by the bounds and conservation criteria.
struct Exp1Run {
    timeloop::TrajectoryRecord record;
    double seconds = 0.0;
};

const Exp1Run& exp1_desk() {
    static const Exp1Run run = [] {
        const auto t0 = std::chrono::steady_clock::now();
        Exp1Run r;
        r.record = timeloop::run(exp1(100, 1e-3, 10.0));
        r.seconds = seconds_since(t0);
        return r;
    }();
    return run;
}

Verdict bounds_preservation() {
    const auto& run = exp1_desk();
    const auto& b = run.record.bounds;
    const double slack = 1e-12;
    const bool ok = b.min_u >= -slack && b.max_u <= 1 + slack && b.max_occupancy <= 1 + slack &&
                    b.min_pool >= -slack && b.max_pool_excess <= slack && run.seconds <= 10.0;
    return {ok, "min_u=" + fmt("%.3e", b.min_u) + " max_occupancy=" + fmt("%.6f", b.max_occupancy) +
                    " min_pool=" + fmt("%.3e", b.min_pool) +
                    " max_pool_excess=" + fmt("%.3e", b.max_pool_excess) +
                    " runtime=" + fmt("%.2f", run.seconds) + "s (<= 10s)"};
}

Verdict conservation() {
    const auto& M = exp1_desk().record.conserved_total;
    double worst = 0.0;
    for (double m : M) worst = std::max(worst, std::abs(m - M.front()));
    return {worst <= 1e-6, "max|M(t)-M(0)|=" + fmt("%.3e", worst) + " (<= 1e-6)"};
}

SimulationConfig section44(const ModelParameters& rates, int cells, double tau, double t_end) {
    SimulationConfig c;
    c.grid = Grid(cells);
    c.tau = tau;
    c.t_end = t_end;
    c.params = rates;
    c.params.lambda_n_max = c.params.lambda_s_max = 0.175;
    c.params.V1 = PotentialSpec::linear(1.5);
    c.params.V2 = PotentialSpec::linear(-1.5);
    c.initial = InitialCondition::uniform(0.1, 0.1, 0.12, 0.12);
    c.newton.tol = 1e-10;
    c.newton.max_iter = 5000;
    c.output_every = 10000;
    return c;
}

Verdict stationary_flux() {
    ModelParameters unit;
    unit.alpha1 = unit.alpha2 = unit.beta1 = unit.beta2 = 1.0;
    unit.D1 = unit.D2 = 1.0;
    const auto cfg = section44(unit, 200, 1e-3, 100.0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rec = timeloop::run(cfg);
    const double secs = seconds_since(t0);
    const auto s = timeloop::steady_state_detect(rec, cfg.grid, cfg.params);
    const bool ok = s.flux_variation <= 1e-3 && std::abs(s.J - 0.118) <= 0.01 && secs <= 60.0;
    return {ok, "J=" + fmt("%.6f", s.J) + " (|J-0.118| <= 0.01) flux_variation=" +
                    fmt("%.3e", s.flux_variation) + " (<= 1e-3) runtime=" + fmt("%.2f", secs) +
                    "s (<= 60s)"};
}

Verdict vanishing_flux() {
    const auto cfg = section44(table1(), 50, 1e-2, 1000.0);
    const auto rec = timeloop::run(cfg);
    const auto s = timeloop::steady_state_detect(rec, cfg.grid, cfg.params);
    const auto v = stationary::vanishing_flux_predicate(s, cfg.params, 0.01);
    const bool ok = std::abs(s.J) < 0.01 && v.consistent;
    return {ok, "J=" + fmt("%.3e", s.J) + " (< 0.01) u1(1)=" + fmt("%.3e", s.u1_at_cone) +
                    " u2(0)=" + fmt("%.3e", s.u2_at_soma) +
                    " predicate=" + (v.consistent ? "consistent" : "inconsistent")};
}

Verdict symmetry() {
    stationary::SymmetricSetup setup;
    setup.cells = 100;
    setup.tau = 1e-3;
    setup.t_end = 10.0;
    setup.lambda_max = 0.175;
    setup.lambda0 = 0.12;
    setup.V1 = PotentialSpec::linear(1.5);
    setup.background = 0.1;
    setup.blocks = {{0.15, 0.35, 0.3, 0.05}};  // breaks uniformity, keeps the mirror property
    setup.newton.tol = 1e-10;
    setup.newton.max_iter = 5000;
    auto cfg = stationary::symmetric_config(setup);
    cfg.output_every = 10;
    const auto rec = timeloop::run(cfg);
    double field = 0.0, pools = 0.0;
    for (const auto& f : rec.snapshots) field = std::max(field, stationary::reflection_defect(f));
    for (const auto& p : rec.pools) pools = std::max(pools, std::abs(p.lambda_n - p.lambda_s));
    return {field <= 1e-6 && pools <= 1e-6,
            "max reflection defect=" + fmt("%.3e", field) +
                " max|Ln-Ls|=" + fmt("%.3e", pools) + " (<= 1e-6) over " +
                std::to_string(rec.snapshots.size()) + " snapshots"};
}

std::string orders_text(const std::vector<convergence::LevelResult>& levels) {
    std::string s;
    for (std::size_t k = 1; k < levels.size(); ++k) s += fmt(" %.3f", levels[k].observed_order);
    return s;
}

Verdict temporal_convergence() {
    convergence::SweepConfig sweep;
    sweep.mode = convergence::Mode::time;
    sweep.base = exp1(200, 1e-2, 1.0);
    sweep.step0 = 1e-2;
    sweep.levels = 5;
    sweep.reference = 1e-5;
    const auto t0 = std::chrono::steady_clock::now();
    const auto levels = convergence::run_sweep(sweep);
    const double secs = seconds_since(t0);
    bool ok = secs <= 300.0;
    for (std::size_t k = 1; k < levels.size(); ++k) {
        ok = ok && levels[k].observed_order >= 0.8 && levels[k].observed_order <= 2.2;
    }
    return {ok, "orders" + orders_text(levels) + " (in [0.8, 2.2]) runtime=" + fmt("%.1f", secs) +
                    "s (<= 300s)"};
}

Verdict spatial_convergence() {
    convergence::SweepConfig sweep;
    sweep.mode = convergence::Mode::space;
    sweep.base = exp1(100, 1e-3, 1.0);
    sweep.step0 = 1e-2;
    sweep.levels = 5;
    sweep.reference = 1e-4;
    const auto levels = convergence::run_sweep(sweep);
    bool ok = true;
    std::string bias;
    for (std::size_t k = 1; k < levels.size(); ++k) {
        ok = ok && levels[k].observed_order >= 0.75 && levels[k].observed_order <= 1.25;
        // Order a first-order scheme would show when the reference itself
        // carries an O(h_ref) error.
        const double expected = std::log2((levels[k - 1].step - sweep.reference) /
                                          (levels[k].step - sweep.reference));
        bias += fmt(" %.3f", expected);
    }
    return {ok, "orders" + orders_text(levels) +
                    " (in [0.75, 1.25]); first order against a reference with its own O(h_ref) "
                    "error predicts" + bias};
}

Verdict lemma_identity() {
    const auto r = invariants::quadratic_form_identity(1000, 31);
    return {r.passed, "worst relative gap=" + fmt("%.3e", r.measured) + " over 1000 samples (<= 1e-12)"};
}

Verdict jacobian() {
    const auto r = invariants::jacobian_vs_fd(8, 5, 32, 1e-6);
    return {r.passed, "worst relative entry error=" + fmt("%.3e", r.measured) + " m=8, 5 states (<= 1e-6)"};
}

Verdict free_energy_decay() {
    auto cfg = exp1(100, 1e-3, 10.0);
    cfg.params.alpha1 = cfg.params.alpha2 = cfg.params.beta1 = cfg.params.beta2 = 0.0;
    const auto rec = timeloop::run(cfg);
    const auto& E = rec.free_energy;
    double rise = -INFINITY;
    for (std::size_t k = 1; k < E.size(); ++k) rise = std::max(rise, E[k] - E[k - 1]);
    const bool ok = E.back() < E.front() && rise <= 1e-6;
    return {ok, "E(0)=" + fmt("%.10f", E.front()) + " E(T)=" + fmt("%.10f", E.back()) +
                    " max step change=" + fmt("%.3e", rise) + " (<= 1e-6)"};
}

// L-infinity gap between the lattice and the FV solution of Experiment 1 at t=1.
double lattice_gap(int m) {
    const auto fv = timeloop::run(exp1(m, 1e-4, 1.0));
    const auto params = table1();
    const auto model = lattice::LatticeModel::from_continuum(params);
    const double h = 1.0 / m;
    lattice::LatticeState s0{std::vector<double>(m, 0.1), std::vector<double>(m, 0.1), 0.0015, 0.12};
    const auto lat = lattice::lattice_integrate(s0, model, 1.0, 1e-3, h,
                                                lattice::SitePotentials::sample(params, m),
                                                lattice::Integrator::midpoint);
    double gap = 0.0;
    const auto& f = fv.final_field();
    for (int j = 0; j < m; ++j) {
        gap = std::max({gap, std::abs(f.u1[j] - lat.u1[j]), std::abs(f.u2[j] - lat.u2[j])});
    }
    return gap;
}

// Moments over (0.1, 0.9). Up to t = 10 the vesicles released at the ends stay
// in layers of width ~sqrt(D t) < 0.1 (species 1) or only push species 2
// outwards, so the window sees the motion of the initial blocks.
bool in_window(double x) { return x > 0.1 && x < 0.9; }

double window_centroid(const std::vector<double>& u, const Grid& g) {
    double mass = 0.0, moment = 0.0;
    for (int j = 0; j < g.cells(); ++j) {
        if (!in_window(g.center(j))) continue;
        mass += u[j];
        moment += u[j] * g.center(j);
    }
    return moment / mass;
}

double window_max(const std::vector<double>& u, const Grid& g) {
    double peak = 0.0;
    for (int j = 0; j < g.cells(); ++j) {
        if (in_window(g.center(j))) peak = std::max(peak, u[j]);
    }
    return peak;
}

Verdict lattice_oracle() {
    const double g50 = lattice_gap(50);
    const double g100 = lattice_gap(100);
    bool ok = g50 <= 0.05 && g100 < g50;
    std::string detail = "Linf gap m=50: " + fmt("%.3e", g50) + " (<= 0.05), m=100: " + fmt("%.3e", g100) +
                         " (shrinks)";

    // Experiment 1: the soma pool empties monotonically.
    const auto& pools = exp1_desk().record.pools;
    bool ls_down = true;
    for (std::size_t k = 1; k < pools.size(); ++k) ls_down = ls_down && pools[k].lambda_s <= pools[k - 1].lambda_s;
    detail += std::string("; exp1 Ls decreasing: ") + (ls_down ? "yes" : "no");

    // Experiment 2: peaks flatten and both blocks drift towards the middle.
    SimulationConfig c2 = exp1(100, 1e-3, 10.0);
    c2.initial = InitialCondition::piecewise({{0.1, 0.4, 0.9, 0.0}, {0.6, 0.9, 0.0, 0.9}}, 0.0015, 0.12);
    c2.output_every = 1000;
    const auto r2 = timeloop::run(c2);
    bool smooth = true, inward = true;
    for (std::size_t k = 1; k < r2.snapshots.size(); ++k) {
        const auto& a = r2.snapshots[k - 1];
        const auto& b = r2.snapshots[k];
        const Grid& g = c2.grid;
        smooth = smooth && window_max(b.u1, g) <= window_max(a.u1, g) + 1e-12 &&
                 window_max(b.u2, g) <= window_max(a.u2, g) + 1e-12;
        inward = inward && window_centroid(b.u1, g) > window_centroid(a.u1, g) &&
                 window_centroid(b.u2, g) < window_centroid(a.u2, g);
    }
    const auto& last = r2.final_field();
    detail += std::string(", exp2 peaks flatten: ") + (smooth ? "yes" : "no") +
              ", centroids move inward: " + (inward ? "yes" : "no") + " (u1 " +
              fmt("%.3f", window_centroid(r2.snapshots.front().u1, c2.grid)) + "->" +
              fmt("%.3f", window_centroid(last.u1, c2.grid)) + ", u2 " +
              fmt("%.3f", window_centroid(r2.snapshots.front().u2, c2.grid)) + "->" +
              fmt("%.3f", window_centroid(last.u2, c2.grid)) + " on (0.1, 0.9))";
    return {ok && ls_down && smooth && inward, detail};
}

struct Criterion {
    const char* name;
    std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
    std::set<std::string> only, expect_fail;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if ((a == "--only" || a == "--expect-fail") && i + 1 < argc) {
            (a == "--only" ? only : expect_fail).insert(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--only NAME]... [--expect-fail NAME]...\n");
            return 2;
        }
    }

    const std::vector<Criterion> criteria = {
        {"bounds_preservation", bounds_preservation},
        {"conservation", conservation},
        {"stationary_flux", stationary_flux},
        {"vanishing_stationary_flux", vanishing_flux},
        {"symmetry", symmetry},
        {"temporal_convergence", temporal_convergence},
        {"spatial_convergence", spatial_convergence},
        {"quadratic_form_identity", lemma_identity},
        {"jacobian", jacobian},
        {"free_energy_decay", free_energy_decay},
        {"lattice_oracle", lattice_oracle},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.contains(c.name)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const bool expected = expect_fail.contains(c.name);
        std::printf("%s %s: %s [%.1fs]%s\n", v.passed ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                    seconds_since(t0), !v.passed && expected ? " (expected failure)" : "");
        std::fflush(stdout);
        if (!v.passed && !expected) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
