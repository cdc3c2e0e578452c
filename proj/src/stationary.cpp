#include "vesicle/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vesicle/errors.hpp"

namespace vesicle::stationary {

PoolState stationary_pool_values(double u1_at_1, double u2_at_0, const ModelParameters& params) {
    auto fill = [](double uptake, double trace, double release, const char* which) {
        if (!(trace >= 0.0)) {
            throw DomainError(std::string("stationary_pool_values: negative trace for ") + which);
        }
        const double denom = uptake * trace + release;
        if (denom == 0.0) {
            throw UndefinedFixedPoint(std::string("stationary_pool_values: ") + which +
                                      " fixed point undefined (zero rates and trace)");
        }
        return uptake * trace / denom;
    };
    return {fill(params.beta1, u1_at_1, params.alpha2, "lambda_n"),
            fill(params.beta2, u2_at_0, params.alpha1, "lambda_s")};
}

VanishingFluxReport vanishing_flux_predicate(const timeloop::SteadySummary& steady,
                                             const ModelParameters& params, double tol) {
    if (steady.u0_at_soma <= tol || steady.u0_at_cone <= tol) {
        std::ostringstream os;
        os << "vanishing_flux_predicate: void fraction trace below tol (u0(0)="
           << steady.u0_at_soma << ", u0(1)=" << steady.u0_at_cone << ")";
        throw DomainError(os.str());
    }
    const PoolState fill = stationary_pool_values(steady.u1_at_cone, steady.u2_at_soma, params);

    VanishingFluxReport r;
    r.J = steady.J;
    r.J_soma = params.alpha1 * fill.lambda_s * steady.u0_at_soma;
    r.J_cone = params.beta1 * (1.0 - fill.lambda_n) * steady.u0_at_cone * steady.u1_at_cone;
    r.u1_cone_small = steady.u1_at_cone <= tol;
    r.u2_soma_small = steady.u2_at_soma <= tol;
    r.flux_small = std::abs(steady.J) <= tol;
    r.consistent = r.u1_cone_small == r.u2_soma_small && r.u2_soma_small == r.flux_small;
    return r;
}

timeloop::SimulationConfig symmetric_config(const SymmetricSetup& base) {
    using timeloop::Block;

    std::vector<Block> sources;
    for (const Block& b : base.blocks) {
        sources.push_back(b);
        sources.push_back({1.0 - b.x_hi, 1.0 - b.x_lo, b.u2, b.u1});
    }

    timeloop::SimulationConfig cfg;
    cfg.grid = Grid(base.cells);
    cfg.tau = base.tau;
    cfg.t_end = base.t_end;
    cfg.newton = base.newton;
    cfg.params.alpha1 = cfg.params.alpha2 = base.alpha;
    cfg.params.beta1 = cfg.params.beta2 = base.beta;
    cfg.params.D1 = cfg.params.D2 = base.D;
    cfg.params.lambda_n_max = cfg.params.lambda_s_max = base.lambda_max;
    cfg.params.V1 = base.V1;
    cfg.params.V2 = base.V1.reflected();

    if (sources.empty()) {
        cfg.initial = timeloop::InitialCondition::uniform(base.background, base.background,
                                                          base.lambda0, base.lambda0);
        return cfg;
    }

    // Split [0, 1] at every block edge and superpose contributions so the
    // resulting blocks are disjoint.
    std::vector<double> cuts{0.0, 1.0};
    for (const Block& b : sources) {
        cuts.push_back(b.x_lo);
        cuts.push_back(b.x_hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Block> pieces;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        Block piece{cuts[k], cuts[k + 1], base.background, base.background};
        const double mid = 0.5 * (piece.x_lo + piece.x_hi);
        for (const Block& b : sources) {
            if (b.x_lo <= mid && mid < b.x_hi) {
                piece.u1 += b.u1;
                piece.u2 += b.u2;
            }
        }
        if (piece.u1 != 0.0 || piece.u2 != 0.0) pieces.push_back(piece);
    }
    cfg.initial = timeloop::InitialCondition::piecewise(std::move(pieces), base.lambda0,
                                                        base.lambda0);
    return cfg;
}

double reflection_defect(const FieldState& field) {
    const std::size_t m = field.size();
    double d = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        d = std::max(d, std::abs(field.u2[j] - field.u1[m - 1 - j]));
    }
    return d;
}

}  // namespace vesicle::stationary
