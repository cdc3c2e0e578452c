#pragma once

// Damped Newton iteration with step schedule (r + 1)^(-exponent).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vesicle/errors.hpp"

namespace vesicle::newton {

enum class DampingMode {
    /// y += lambda_r * delta; lambda_r = (r+1)^-e, divided by |delta|_inf when that exceeds 1.
    capped_increment,
    /// y += (r+1)^-e * delta / |delta|_inf  (fixed step length in the max norm).
    paper_normalized,
};

struct NewtonConfig {
    double tol = 1e-3;  ///< stop when |F|_inf < tol
    int max_iter = 200;
    double damping_exponent = 0.75;
    DampingMode damping_mode = DampingMode::capped_increment;

    void validate() const {
        if (!(tol > 0.0)) throw DomainError("newton: tol must be > 0");
        if (max_iter < 1) throw DomainError("newton: max_iter must be >= 1");
        if (!std::isfinite(damping_exponent)) throw DomainError("newton: bad damping exponent");
    }

    bool operator==(const NewtonConfig& other) const = default;
};

struct NewtonReport {
    int iterations = 0;
    double final_residual_norm = 0.0;
    bool converged = false;
    std::vector<double> step_norms;  ///< |delta|_inf per iteration
};

struct NewtonResult {
    std::vector<double> y;
    NewtonReport report;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, NewtonReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const NewtonReport& report() const { return report_; }

private:
    NewtonReport report_;
};

inline double max_norm(std::span<const double> v) {
    double n = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return x;  // propagate nan/inf
        n = std::max(n, std::abs(x));
    }
    return n;
}

/// Step factor applied to the Newton increment at iteration r.
inline double damping_factor(int r, double step_norm, const NewtonConfig& cfg) {
    const double schedule = std::pow(static_cast<double>(r + 1), -cfg.damping_exponent);
    switch (cfg.damping_mode) {
        case DampingMode::capped_increment:
            return step_norm > 1.0 ? schedule / step_norm : schedule;
        case DampingMode::paper_normalized:
            return step_norm > 0.0 ? schedule / step_norm : 0.0;
    }
    return schedule;
}

template <class F>
concept ResidualFunction = requires(F f, std::span<const double> y) {
    { f(y) } -> std::convertible_to<std::vector<double>>;
};

template <class F>
concept JacobianFunction = requires(F f, std::span<const double> y, std::span<const double> r) {
    { f(y).solve(r) } -> std::convertible_to<std::vector<double>>;
};

/// Iterates y <- y + lambda_r * delta with J(y) delta = -F(y) until |F(y)|_inf < tol.
/// Throws SingularMatrixError from the linear solve and NonConvergenceError
/// (carrying the report) after max_iter iterations or on a non-finite residual.
template <ResidualFunction Residual, JacobianFunction JacobianFn>
NewtonResult newton_solve(Residual&& residual, JacobianFn&& jacobian, std::vector<double> y0,
                          const NewtonConfig& cfg) {
    cfg.validate();
    NewtonResult out{std::move(y0), {}};
    auto& y = out.y;
    auto& rep = out.report;

    std::vector<double> F = residual(std::span<const double>(y));
    double norm = max_norm(F);
    for (int r = 0;; ++r) {
        rep.final_residual_norm = norm;
        if (!std::isfinite(norm)) {
            throw NonConvergenceError("newton: residual became non-finite at iteration " +
                                          std::to_string(r),
                                      rep);
        }
        if (norm < cfg.tol) {
            rep.converged = true;
            return out;
        }
        if (r >= cfg.max_iter) {
            throw NonConvergenceError("newton: no convergence after " +
                                          std::to_string(cfg.max_iter) + " iterations (|F|=" +
                                          std::to_string(norm) + ")",
                                      rep);
        }
        for (double& v : F) v = -v;
        const auto J = jacobian(std::span<const double>(y));
        const std::vector<double> delta = J.solve(std::span<const double>(F));
        const double step = max_norm(delta);
        rep.step_norms.push_back(step);
        const double lambda = damping_factor(r, step, cfg);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += lambda * delta[i];
        ++rep.iterations;
        F = residual(std::span<const double>(y));
        norm = max_norm(F);
    }
}

}  // namespace vesicle::newton
