#include "vesicle/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "vesicle/errors.hpp"
#include "vesicle/stationary.hpp"

namespace vesicle::output {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_profiles(std::ostream& out, const timeloop::TrajectoryRecord& record, const Grid& grid) {
    out << "t,x,u1,u2,u0\n";
    for (std::size_t k = 0; k < record.snapshots.size(); ++k) {
        const std::string t = format_number(record.times[k]);
        const FieldState& f = record.snapshots[k];
        for (std::size_t j = 0; j < f.size(); ++j) {
            out << t << ',' << format_number(grid.center(static_cast<int>(j))) << ','
                << format_number(f.u1[j]) << ',' << format_number(f.u2[j]) << ','
                << format_number(f.u0(j)) << '\n';
        }
    }
}

void write_pools(std::ostream& out, const timeloop::TrajectoryRecord& record) {
    out << "t,lambda_n,lambda_s,J1_0,J1_1,J2_0,J2_1,mass_total,free_energy,newton_iters\n";
    for (std::size_t k = 0; k < record.step_times.size(); ++k) {
        const auto& p = record.pools[k];
        const auto& J = record.fluxes[k];
        out << format_number(record.step_times[k]) << ',' << format_number(p.lambda_n) << ','
            << format_number(p.lambda_s) << ',' << format_number(J.j1_0) << ','
            << format_number(J.j1_1) << ',' << format_number(J.j2_0) << ','
            << format_number(J.j2_1) << ',' << format_number(record.conserved_total[k]) << ','
            << format_number(record.free_energy[k]) << ',' << record.newton_iterations[k] << '\n';
    }
}

void write_convergence(std::ostream& out, const std::vector<convergence::LevelResult>& levels) {
    out << "level,tau_or_h,error,observed_order\n";
    for (const auto& l : levels) {
        out << l.level << ',' << format_number(l.step) << ',' << format_number(l.error) << ','
            << format_number(l.observed_order) << '\n';
    }
}

namespace {

// JSON has no NaN; non-finite values become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json failure_json(const std::optional<Failure>& failure) {
    if (!failure) return nullptr;
    return {{"cause", failure->cause}, {"message", failure->message}, {"step", failure->step}};
}

json steady_json(const config::RunConfig& cfg, const timeloop::TrajectoryRecord& record) {
    if (record.snapshots.size() < 2) return nullptr;
    const auto& sim = cfg.sim;
    const auto s = timeloop::steady_state_detect(record, sim.grid, sim.params, cfg.steady.threshold);
    json out = {
        {"is_steady", s.is_steady},
        {"threshold", cfg.steady.threshold},
        {"J", number(s.J)},
        {"flux_variation", number(s.flux_variation)},
        {"total_flux", number(s.total_flux)},
        {"u1_at_cone", s.u1_at_cone},
        {"u2_at_soma", s.u2_at_soma},
        {"u0_at_soma", s.u0_at_soma},
        {"u0_at_cone", s.u0_at_cone},
        {"stationary_pools", nullptr},
        {"vanishing_flux", nullptr},
    };
    try {
        const auto fill = stationary::stationary_pool_values(s.u1_at_cone, s.u2_at_soma, sim.params);
        out["stationary_pools"] = {
            {"lambda_n", fill.lambda_n * sim.params.lambda_n_max},
            {"lambda_s", fill.lambda_s * sim.params.lambda_s_max},
            {"defect_n", std::abs(fill.lambda_n * sim.params.lambda_n_max - s.pools.lambda_n)},
            {"defect_s", std::abs(fill.lambda_s * sim.params.lambda_s_max - s.pools.lambda_s)},
        };
        const auto v = stationary::vanishing_flux_predicate(s, sim.params, cfg.steady.flux_tol);
        out["vanishing_flux"] = {
            {"tol", cfg.steady.flux_tol},
            {"consistent", v.consistent},
            {"u1_cone_small", v.u1_cone_small},
            {"u2_soma_small", v.u2_soma_small},
            {"flux_small", v.flux_small},
            {"J_soma", v.J_soma},
            {"J_cone", v.J_cone},
        };
    } catch (const stationary::UndefinedFixedPoint& e) {
        out["stationary_pools"] = {{"error", e.what()}};
    } catch (const DomainError& e) {
        out["vanishing_flux"] = {{"error", e.what()}};
    }
    return out;
}

}  // namespace

json run_summary(const config::RunConfig& cfg, const timeloop::TrajectoryRecord& record,
                 const std::optional<Failure>& failure, double wall_seconds) {
    json out = {
        {"schema_version", config::kSchemaVersion},
        {"status", failure ? "failed" : "ok"},
        {"failure", failure_json(failure)},
        {"config", config::to_json(cfg)},
        {"steps_completed", record.step_times.empty() ? 0 : record.step_times.size() - 1},
        {"halvings", record.halvings},
        {"wall_time_s", wall_seconds},
        {"bounds",
         {{"min_u", record.bounds.min_u},
          {"max_u", record.bounds.max_u},
          {"max_occupancy", record.bounds.max_occupancy},
          {"min_pool", record.bounds.min_pool},
          {"max_pool_excess", record.bounds.max_pool_excess}}},
        {"final", nullptr},
        {"steady", nullptr},
    };
    if (!record.snapshots.empty()) {
        const auto& f = record.final_field();
        const auto& p = record.final_pools();
        out["final"] = {{"t", record.times.back()},
                        {"u1", f.u1},
                        {"u2", f.u2},
                        {"lambda_n", p.lambda_n},
                        {"lambda_s", p.lambda_s},
                        {"mass_total", record.conserved_total.back()},
                        {"free_energy", number(record.free_energy.back())}};
    }
    if (!failure) out["steady"] = steady_json(cfg, record);
    return out;
}

json sweep_summary(const config::RunConfig& cfg, const std::vector<convergence::LevelResult>& levels,
                   const std::optional<Failure>& failure, double wall_seconds) {
    json rows = json::array();
    for (const auto& l : levels) {
        rows.push_back({{"level", l.level},
                        {"tau_or_h", l.step},
                        {"error", number(l.error)},
                        {"observed_order", number(l.observed_order)}});
    }
    return {{"schema_version", config::kSchemaVersion},
            {"status", failure ? "failed" : "ok"},
            {"failure", failure_json(failure)},
            {"config", config::to_json(cfg)},
            {"levels", rows},
            {"wall_time_s", wall_seconds}};
}

}  // namespace vesicle::output
