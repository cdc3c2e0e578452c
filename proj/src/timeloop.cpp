#include "vesicle/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "vesicle/errors.hpp"
#include "vesicle/fv.hpp"

namespace vesicle::timeloop {

InitialCondition InitialCondition::uniform(double u1, double u2, double lambda_n0,
                                           double lambda_s0) {
    InitialCondition ic;
    ic.kind = Kind::uniform;
    ic.u1 = u1;
    ic.u2 = u2;
    ic.lambda_n0 = lambda_n0;
    ic.lambda_s0 = lambda_s0;
    return ic;
}

InitialCondition InitialCondition::piecewise(std::vector<Block> blocks, double lambda_n0,
                                             double lambda_s0) {
    InitialCondition ic;
    ic.kind = Kind::piecewise;
    ic.blocks = std::move(blocks);
    ic.lambda_n0 = lambda_n0;
    ic.lambda_s0 = lambda_s0;
    return ic;
}

FieldState InitialCondition::build(const Grid& grid) const {
    if (kind == Kind::uniform) {
        return FieldState::uniform(grid, u1, u2);
    }
    auto sorted = blocks;
    std::sort(sorted.begin(), sorted.end(),
              [](const Block& a, const Block& b) { return a.x_lo < b.x_lo; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Block& b = sorted[i];
        if (!(b.x_lo >= 0.0 && b.x_hi <= 1.0 && b.x_lo < b.x_hi)) {
            throw DomainError("initial block must satisfy 0 <= x_lo < x_hi <= 1");
        }
        if (i > 0 && b.x_lo < sorted[i - 1].x_hi) {
            throw DomainError("initial blocks overlap");
        }
    }
    FieldState field = FieldState::uniform(grid, 0.0, 0.0);
    const double h = grid.width();
    for (int j = 0; j < grid.cells(); ++j) {
        const double lo = grid.face(j);
        const double hi = grid.face(j + 1);
        for (const Block& b : sorted) {
            const double overlap = std::max(0.0, std::min(hi, b.x_hi) - std::max(lo, b.x_lo));
            field.u1[static_cast<std::size_t>(j)] += b.u1 * overlap / h;
            field.u2[static_cast<std::size_t>(j)] += b.u2 * overlap / h;
        }
    }
    return field;
}

int SimulationConfig::step_count() const {
    if (!(tau > 0.0) || !(t_end > 0.0)) {
        throw DomainError("simulation: tau and t_end must be > 0");
    }
    const double ratio = t_end / tau;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
        return static_cast<int>(nearest);
    }
    if (!allow_short_last_step) {
        std::ostringstream os;
        os.precision(17);
        os << "simulation: t_end/tau = " << ratio << " is not an integer step count";
        throw DomainError(os.str());
    }
    return static_cast<int>(std::ceil(ratio));
}

void SimulationConfig::validate() const {
    params.validate();
    newton.validate();
    (void)step_count();
    if (output_every < 1) throw DomainError("simulation: output_every must be >= 1");
    if (max_halvings < 0) throw DomainError("simulation: max_halvings must be >= 0");
    for (const auto* pot : {&params.V1, &params.V2}) {
        if (pot->is_tabulated() && static_cast<int>(pot->face_slopes().size()) != grid.faces()) {
            throw DomainError("simulation: tabulated potential length does not match grid faces");
        }
    }
    initial.build(grid).validate(grid);
    if (!(initial.lambda_n0 >= 0.0 && initial.lambda_n0 <= params.lambda_n_max &&
          initial.lambda_s0 >= 0.0 && initial.lambda_s0 <= params.lambda_s_max)) {
        throw DomainError("simulation: initial pools must lie within [0, capacity]");
    }
}

double conserved_total(const FieldState& field, const PoolState& pools, const Grid& grid) {
    double s = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        s += field.u1[j] + field.u2[j];
    }
    return grid.width() * s + pools.lambda_n + pools.lambda_s;
}

namespace {

class Stepper {
public:
    Stepper(const SimulationConfig& cfg, TrajectoryRecord& rec) : cfg_(cfg), rec_(rec) {}

    // Advances y_old by dt; retries as two half steps on solver failure.
    std::vector<double> advance(const std::vector<double>& y_old, double dt, int depth, int step,
                                int& iterations, const std::vector<double>* guess = nullptr) {
        const auto& grid = cfg_.grid;
        const auto& params = cfg_.params;
        try {
            auto result = newton::newton_solve(
                [&](std::span<const double> y) {
                    return fv::assemble_residual(y, y_old, params, grid, dt);
                },
                [&](std::span<const double> y) {
                    return fv::assemble_jacobian(y, params, grid, dt);
                },
                guess ? *guess : y_old, cfg_.newton);
            iterations += result.report.iterations;
            check(result.y, step);
            return std::move(result.y);
        } catch (const newton::NonConvergenceError& e) {
            iterations += e.report().iterations;
            if (guess) return advance(y_old, dt, depth, step, iterations);
            return retry(y_old, dt, depth, step, iterations, e.what());
        } catch (const SingularMatrixError& e) {
            if (guess) return advance(y_old, dt, depth, step, iterations);
            return retry(y_old, dt, depth, step, iterations, e.what());
        }
    }

    void check(const std::vector<double>& y, int step) {
        const fv::UnknownLayout L(cfg_.grid);
        auto& b = rec_.bounds;
        for (int j = 0; j < cfg_.grid.cells(); ++j) {
            const double a = y[static_cast<std::size_t>(L.u1(j))];
            const double c = y[static_cast<std::size_t>(L.u2(j))];
            b.min_u = std::min({b.min_u, a, c});
            b.max_u = std::max({b.max_u, a, c});
            b.max_occupancy = std::max(b.max_occupancy, a + c);
        }
        const double ln = y[static_cast<std::size_t>(L.lambda_n())];
        const double ls = y[static_cast<std::size_t>(L.lambda_s())];
        b.min_pool = std::min({b.min_pool, ln, ls});
        b.max_pool_excess = std::max(
            {b.max_pool_excess, ln - cfg_.params.lambda_n_max, ls - cfg_.params.lambda_s_max});

        const auto state = fv::unpack(y, cfg_.grid);
        try {
            state.field.validate(cfg_.grid, kAdmissibleSlack);
            check_admissible(state.pools, cfg_.params, kAdmissibleSlack);
        } catch (const DomainError& e) {
            throw AdmissibilityError(
                "step " + std::to_string(step) + ": accepted state inadmissible: " + e.what(),
                step);
        }
    }

private:
    std::vector<double> retry(const std::vector<double>& y_old, double dt, int depth, int step,
                              int& iterations, const std::string& cause) {
        if (depth >= cfg_.max_halvings) {
            throw SolverFailure("step " + std::to_string(step) + ": solver failed after " +
                                    std::to_string(depth) + " halvings: " + cause,
                                step);
        }
        ++rec_.halvings;
        const auto mid = advance(y_old, 0.5 * dt, depth + 1, step, iterations);
        return advance(mid, 0.5 * dt, depth + 1, step, iterations);
    }

    const SimulationConfig& cfg_;
    TrajectoryRecord& rec_;
};

// Copy projected onto the closed admissible set, for diagnostics only.
FieldState clamped(const FieldState& f) {
    FieldState c = f;
    for (std::size_t j = 0; j < c.size(); ++j) {
        double a = std::max(0.0, c.u1[j]);
        double b = std::max(0.0, c.u2[j]);
        const double s = a + b;
        if (s > 1.0) {
            a /= s;
            b /= s;
        }
        c.u1[j] = a;
        c.u2[j] = b;
    }
    return c;
}

void record_step(TrajectoryRecord& rec, const SimulationConfig& cfg, double t,
                 const std::vector<double>& y, int iterations) {
    const auto state = fv::unpack(y, cfg.grid);
    rec.step_times.push_back(t);
    rec.pools.push_back(state.pools);
    rec.fluxes.push_back(fv::boundary_fluxes(y, cfg.params, cfg.grid));
    rec.conserved_total.push_back(conserved_total(state.field, state.pools, cfg.grid));
    rec.free_energy.push_back(free_energy(clamped(state.field), cfg.params, cfg.grid));
    rec.newton_iterations.push_back(iterations);
}

void record_snapshot(TrajectoryRecord& rec, const SimulationConfig& cfg, double t,
                     const std::vector<double>& y) {
    auto state = fv::unpack(y, cfg.grid);
    rec.times.push_back(t);
    rec.snapshots.push_back(std::move(state.field));
    rec.snapshot_pools.push_back(state.pools);
}

}  // namespace

void run(const SimulationConfig& config, TrajectoryRecord& record) {
    config.validate();
    record = TrajectoryRecord{};
    const int steps = config.step_count();

    std::vector<double> y = fv::pack(config.initial.build(config.grid), config.initial.pools());
    Stepper stepper(config, record);
    constexpr double inf = std::numeric_limits<double>::infinity();
    record.bounds = {inf, -inf, -inf, inf, -inf};
    stepper.check(y, 0);
    record_step(record, config, 0.0, y, 0);
    record_snapshot(record, config, 0.0, y);

    std::vector<double> y_prev;
    std::vector<double> guess;
    double dt_prev = 0.0;
    for (int k = 1; k <= steps; ++k) {
        const double t = std::min(k * config.tau, config.t_end);
        const double dt = t - std::min((k - 1) * config.tau, config.t_end);
        int iterations = 0;
        const bool predict = config.extrapolate_guess && !y_prev.empty();
        if (predict) {
            // Linear extrapolation through the last two accepted states.
            guess.resize(y.size());
            const double ratio = dt / dt_prev;
            for (std::size_t i = 0; i < y.size(); ++i) guess[i] = y[i] + ratio * (y[i] - y_prev[i]);
        }
        y_prev = y;
        dt_prev = dt;
        y = stepper.advance(y_prev, dt, 0, k, iterations, predict ? &guess : nullptr);
        record_step(record, config, t, y, iterations);
        if (k % config.output_every == 0 || k == steps) {
            record_snapshot(record, config, t, y);
        }
    }
}

TrajectoryRecord run(const SimulationConfig& config) {
    TrajectoryRecord record;
    run(config, record);
    return record;
}

SteadySummary steady_state_detect(const TrajectoryRecord& record, const Grid& grid,
                                  const ModelParameters& params, double threshold) {
    if (record.snapshots.size() < 2) {
        throw DomainError("steady_state_detect: record needs at least two snapshots");
    }
    const auto y = fv::pack(record.final_field(), record.final_pools());
    SteadySummary s;
    s.j1_faces = fv::all_face_fluxes(Species::anterograde, y, params, grid);
    s.j2_faces = fv::all_face_fluxes(Species::retrograde, y, params, grid);
    s.J = std::accumulate(s.j1_faces.begin(), s.j1_faces.end(), 0.0) /
          static_cast<double>(s.j1_faces.size());
    for (std::size_t f = 0; f < s.j1_faces.size(); ++f) {
        s.flux_variation = std::max(s.flux_variation, std::abs(s.j1_faces[f] - s.J));
        s.total_flux = std::max(s.total_flux, std::abs(s.j1_faces[f] + s.j2_faces[f]));
    }
    const auto& field = record.final_field();
    const std::size_t last = field.size() - 1;
    s.u1_at_cone = field.u1[last];
    s.u2_at_soma = field.u2[0];
    s.u0_at_soma = field.u0(0);
    s.u0_at_cone = field.u0(last);
    s.pools = record.final_pools();
    s.is_steady = s.flux_variation <= threshold && s.total_flux <= threshold;
    return s;
}

bool stationary_pools_check(const TrajectoryRecord& record, const Grid& grid,
                            const ModelParameters& params, double tol, double steady_threshold) {
    const SteadySummary s = steady_state_detect(record, grid, params, steady_threshold);
    if (!s.is_steady) {
        std::ostringstream os;
        os << "stationary_pools_check: record is not steady (flux variation " << s.flux_variation
           << ", total flux " << s.total_flux << ")";
        throw NotSteadyError(os.str());
    }
    // Zero of  uptake * (1 - L/Lmax) * u0 * u - release * (L/Lmax) * u0  in L.
    auto fixed_point = [](double uptake, double trace, double release, double cap,
                          double observed) {
        const double denom = uptake * trace + release;
        if (denom == 0.0) return observed;  // pool equation vanishes identically
        return cap * uptake * trace / denom;
    };
    const double ln = fixed_point(params.beta1, s.u1_at_cone, params.alpha2, params.lambda_n_max,
                                  s.pools.lambda_n);
    const double ls = fixed_point(params.beta2, s.u2_at_soma, params.alpha1, params.lambda_s_max,
                                  s.pools.lambda_s);
    return std::abs(ln - s.pools.lambda_n) <= tol && std::abs(ls - s.pools.lambda_s) <= tol;
}

}  // namespace vesicle::timeloop
