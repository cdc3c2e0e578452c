#include "vesicle/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "vesicle/errors.hpp"

namespace vesicle::convergence {

double mean_error(const FieldState& u, const PoolState& pools, const FieldState& ref,
                  const PoolState& ref_pools) {
    if (u.size() != ref.size() || u.u2.size() != ref.u2.size()) {
        throw DomainError("mean_error: state sizes differ");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        sum += (u.u1[j] - ref.u1[j]) * (u.u1[j] - ref.u1[j]);
        sum += (u.u2[j] - ref.u2[j]) * (u.u2[j] - ref.u2[j]);
    }
    const double dn = pools.lambda_n - ref_pools.lambda_n;
    const double ds = pools.lambda_s - ref_pools.lambda_s;
    sum += dn * dn + ds * ds;
    return std::sqrt(sum) / std::sqrt(2.0 * (static_cast<double>(u.size()) + 1.0));
}

FieldState restrict_to(const FieldState& fine, const Grid& fine_grid, const Grid& coarse_grid) {
    if (static_cast<int>(fine.size()) != fine_grid.cells()) {
        throw DomainError("restrict_to: field does not match fine grid");
    }
    if (coarse_grid.cells() > fine_grid.cells()) {
        throw DomainError("restrict_to: target grid is finer than source");
    }
    FieldState out = FieldState::uniform(coarse_grid, 0.0, 0.0);
    const double H = coarse_grid.width();
    const int mf = fine_grid.cells();
    int f = 0;
    for (int c = 0; c < coarse_grid.cells(); ++c) {
        const double lo = coarse_grid.face(c);
        const double hi = coarse_grid.face(c + 1);
        while (f > 0 && fine_grid.face(f) > lo) --f;
        for (; f < mf && fine_grid.face(f) < hi; ++f) {
            const double w = std::min(hi, fine_grid.face(f + 1)) - std::max(lo, fine_grid.face(f));
            if (w <= 0.0) continue;
            out.u1[static_cast<std::size_t>(c)] += fine.u1[static_cast<std::size_t>(f)] * w / H;
            out.u2[static_cast<std::size_t>(c)] += fine.u2[static_cast<std::size_t>(f)] * w / H;
        }
    }
    return out;
}

namespace {

int cells_for(double h) {
    const double m = 1.0 / h;
    const double nearest = std::round(m);
    if (nearest < 2.0 || std::abs(m - nearest) > 1e-9 * m) {
        std::ostringstream os;
        os << "convergence: h=" << h << " does not divide the unit interval";
        throw DomainError(os.str());
    }
    return static_cast<int>(nearest);
}

double step_of(const SweepConfig& s, int level) {
    return level == 0 ? s.reference : s.step0 * std::ldexp(1.0, -level);
}

}  // namespace

void SweepConfig::validate() const {
    if (levels < 2) throw DomainError("convergence: need at least two levels");
    if (!(step0 > 0.0) || !(reference > 0.0)) {
        throw DomainError("convergence: step sizes must be > 0");
    }
    if (!(reference < step_of(*this, levels))) {
        throw DomainError("convergence: reference is not strictly finer than every level");
    }
    for (int k = 0; k <= levels; ++k) level_config(*this, k).validate();
}

timeloop::SimulationConfig level_config(const SweepConfig& sweep, int level) {
    timeloop::SimulationConfig cfg = sweep.base;
    const double step = step_of(sweep, level);
    if (sweep.mode == Mode::time) {
        cfg.tau = step;
    } else {
        cfg.grid = Grid(cells_for(step));
    }
    cfg.output_every = std::numeric_limits<int>::max();
    return cfg;
}

std::vector<LevelResult> run_sweep(const SweepConfig& sweep) {
    sweep.validate();
    const auto policy = sweep.parallel ? std::launch::async : std::launch::deferred;

    std::vector<std::future<timeloop::TrajectoryRecord>> runs;
    for (int k = 0; k <= sweep.levels; ++k) {
        runs.push_back(std::async(policy, [cfg = level_config(sweep, k)] {
            return timeloop::run(cfg);
        }));
    }
    const timeloop::TrajectoryRecord ref = runs[0].get();
    const Grid ref_grid = level_config(sweep, 0).grid;

    std::vector<LevelResult> out;
    for (int k = 1; k <= sweep.levels; ++k) {
        const timeloop::TrajectoryRecord rec = runs[static_cast<std::size_t>(k)].get();
        const Grid grid = level_config(sweep, k).grid;
        const FieldState ref_field = sweep.mode == Mode::time
                                         ? ref.final_field()
                                         : restrict_to(ref.final_field(), ref_grid, grid);
        LevelResult r;
        r.level = k;
        r.step = step_of(sweep, k);
        r.error = mean_error(rec.final_field(), rec.final_pools(), ref_field, ref.final_pools());
        r.observed_order = out.empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : std::log2(out.back().error / r.error);
        out.push_back(r);
    }
    return out;
}

}  // namespace vesicle::convergence
