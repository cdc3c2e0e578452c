#include "vesicle/app.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "vesicle/errors.hpp"
#include "vesicle/invariants.hpp"
#include "vesicle/output.hpp"

namespace vesicle::app {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

config::RunConfig resolve_config(const std::optional<fs::path>& config_path,
                                 const std::optional<std::string>& preset,
                                 const std::vector<std::string>& overrides) {
    if (config_path.has_value() == preset.has_value()) {
        throw config::ConfigError("<command line>", "give exactly one of --config, --preset");
    }
    nlohmann::json doc =
        config::read_json_file(config_path ? *config_path : config::preset_path(*preset));
    for (const auto& o : overrides) config::apply_override(doc, o);
    return config::from_json(doc);
}

int run(const config::RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    fs::create_directories(out_dir);
    const auto start = std::chrono::steady_clock::now();
    timeloop::TrajectoryRecord record;
    std::optional<output::Failure> failure;
    try {
        timeloop::run(cfg.sim, record);
    } catch (const timeloop::AdmissibilityError& e) {
        failure = output::Failure{"admissibility", e.what(), e.step()};
    } catch (const timeloop::SolverFailure& e) {
        failure = output::Failure{"solver_failure", e.what(), e.step()};
    }
    const double wall = seconds_since(start);

    {
        auto out = open_out(out_dir / "profiles.csv");
        output::write_profiles(out, record, cfg.sim.grid);
    }
    {
        auto out = open_out(out_dir / "pools.csv");
        output::write_pools(out, record);
    }
    write_json(out_dir / "summary.json", output::run_summary(cfg, record, failure, wall));

    if (failure) {
        log << "run failed: " << failure->message << '\n';
        return kSolverFailure;
    }
    log << "run " << (cfg.name.empty() ? "<unnamed>" : cfg.name) << ": "
        << record.step_times.size() - 1 << " steps, " << record.halvings << " halvings, "
        << wall << " s -> " << out_dir.string() << '\n';
    return kOk;
}

int converge(const config::RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto sweep = cfg.sweep();
    try {
        sweep.validate();
    } catch (const DomainError& e) {
        throw config::ConfigError("convergence", e.what());
    }
    fs::create_directories(out_dir);
    const auto start = std::chrono::steady_clock::now();
    std::vector<convergence::LevelResult> levels;
    std::optional<output::Failure> failure;
    try {
        levels = convergence::run_sweep(sweep);
    } catch (const timeloop::RunError& e) {
        failure = output::Failure{"solver_failure", e.what(), e.step()};
    }
    const double wall = seconds_since(start);
    {
        auto out = open_out(out_dir / "convergence.csv");
        output::write_convergence(out, levels);
    }
    write_json(out_dir / "summary.json", output::sweep_summary(cfg, levels, failure, wall));
    if (failure) {
        log << "sweep failed: " << failure->message << '\n';
        return kSolverFailure;
    }
    for (const auto& l : levels) {
        log << "level " << l.level << "  step " << output::format_number(l.step) << "  error "
            << output::format_number(l.error) << "  order "
            << output::format_number(l.observed_order) << '\n';
    }
    return kOk;
}

int validate(std::ostream& log) {
    bool ok = true;
    for (const auto& r : invariants::run_all()) {
        ok = ok && r.passed;
        log << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << r.measured
            << "  bound=" << r.bound << "  samples=" << r.samples << '\n';
    }
    return ok ? kOk : kValidationFailure;
}

}  // namespace vesicle::app
