#pragma once

// Fast property checks run by `vesicle validate`. Each draws its own random
// samples from a fixed seed, so the outcome is reproducible.

#include <cstdint>
#include <string>
#include <vector>

namespace vesicle::invariants {

struct PropertyResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;  ///< worst observed defect
    double bound = 0.0;     ///< pass threshold on `measured`
    int samples = 0;
};

/// Worst relative gap between the two sides of the quadratic-form identity.
PropertyResult quadratic_form_identity(int samples = 1000, std::uint64_t seed = 1);

/// Worst relative entry error of the analytic Jacobian against central
/// differences of the residual; out-of-pattern entries count as absolute errors.
PropertyResult jacobian_vs_fd(int cells = 8, int states = 5, std::uint64_t seed = 2,
                              double bound = 1e-6);

/// h * sum(field rows) + pool rows equals the change of the conserved total.
PropertyResult conservation_telescoping(int samples = 60, std::uint64_t seed = 3);

/// |u - inverse(entropy_variables(u))| over interior samples.
PropertyResult entropy_round_trip(int samples = 2000, std::uint64_t seed = 4);

/// Relative defect of the lattice total under lattice_rhs.
PropertyResult lattice_conservation(int samples = 100, std::uint64_t seed = 5);

std::vector<PropertyResult> run_all();

}  // namespace vesicle::invariants
