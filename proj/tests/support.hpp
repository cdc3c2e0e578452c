#pragma once

#include <random>
#include <vector>

#include "vesicle/fv.hpp"
#include "vesicle/model.hpp"

namespace testing {

inline vesicle::ModelParameters table_params() {
    vesicle::ModelParameters p;
    p.alpha1 = p.alpha2 = 0.2666;
    p.beta1 = p.beta2 = 3.0;
    p.lambda_n_max = 0.0029;
    p.lambda_s_max = 0.175;
    p.D1 = 0.0004;
    p.D2 = 0.004;
    p.V1 = vesicle::PotentialSpec::linear(1.75);
    p.V2 = vesicle::PotentialSpec::linear(-1.5);
    return p;
}

/// Strictly interior sample of {u1, u2 > 0, u1 + u2 < 1}.
inline vesicle::Concentrations random_interior(std::mt19937_64& rng, double margin = 1e-3) {
    std::uniform_real_distribution<double> U(margin, 1.0 - margin);
    while (true) {
        const double a = U(rng);
        const double b = U(rng);
        if (a + b < 1.0 - margin) return {a, b};
    }
}

/// Random admissible unknown vector for `grid` and `params`.
inline std::vector<double> random_state(std::mt19937_64& rng, const vesicle::Grid& grid,
                                        const vesicle::ModelParameters& params) {
    vesicle::FieldState f = vesicle::FieldState::uniform(grid, 0.0, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const auto c = random_interior(rng, 0.01);
        f.u1[j] = c.u1;
        f.u2[j] = c.u2;
    }
    std::uniform_real_distribution<double> F(0.05, 0.95);
    return vesicle::fv::pack(f, {F(rng) * params.lambda_n_max, F(rng) * params.lambda_s_max});
}

}  // namespace testing
