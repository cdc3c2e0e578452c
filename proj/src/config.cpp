#include "vesicle/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "vesicle/errors.hpp"

#ifndef VESICLE_SOURCE_PRESET_DIR
#define VESICLE_SOURCE_PRESET_DIR "presets"
#endif

namespace vesicle::config {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Typed view of one JSON object. Every key read is recorded; finish() rejects
// the rest.
class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return obj_.contains(key);
    }

    const std::string& path() const { return path_; }
    std::string key_path(const std::string& key) const { return join(path_, key); }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
        out = v.get<double>();
    }

    void integer(const std::string& key, int& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
        out = v.get<int>();
    }

    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_boolean()) throw ConfigError(key_path(key), "expected true or false");
        out = v.get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
        out = v.get<std::string>();
    }

    template <typename F>
    void object(const std::string& key, F&& read) {
        if (!has(key)) return;
        Reader sub(obj_.at(key), key_path(key));
        read(sub);
        sub.finish();
    }

    const json& raw(const std::string& key) const { return obj_.at(key); }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.contains(key)) throw ConfigError(key_path(key), "unknown key");
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename T>
T choose(const std::string& key, const std::string& value,
         std::initializer_list<std::pair<const char*, T>> options) {
    std::string names;
    for (const auto& [name, v] : options) {
        if (value == name) return v;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(key, "'" + value + "' is not one of " + names);
}

PotentialSpec read_potential(Reader& r, const std::string& key, PotentialSpec current) {
    r.object(key, [&](Reader& v) {
        const bool slope = v.has("slope");
        const bool table = v.has("face_slopes");
        if (slope == table) throw ConfigError(v.path(), "give exactly one of slope, face_slopes");
        if (slope) {
            double s = 0.0;
            v.number("slope", s);
            current = PotentialSpec::linear(s);
            return;
        }
        const json& arr = v.raw("face_slopes");
        if (!arr.is_array()) throw ConfigError(v.key_path("face_slopes"), "expected an array");
        std::vector<double> values;
        for (const json& x : arr) {
            if (!x.is_number()) throw ConfigError(v.key_path("face_slopes"), "expected numbers");
            values.push_back(x.get<double>());
        }
        try {
            current = PotentialSpec::tabulated(std::move(values));
        } catch (const DomainError& e) {
            throw ConfigError(v.key_path("face_slopes"), e.what());
        }
    });
    return current;
}

json potential_json(const PotentialSpec& V) {
    if (V.is_tabulated()) return {{"face_slopes", V.face_slopes()}};
    return {{"slope", V.slope()}};
}

void read_initial(Reader& r, timeloop::InitialCondition& ic) {
    std::string kind = ic.kind == timeloop::InitialCondition::Kind::uniform ? "uniform" : "piecewise";
    r.string("kind", kind);
    ic.kind = choose<timeloop::InitialCondition::Kind>(
        r.key_path("kind"), kind,
        {{"uniform", timeloop::InitialCondition::Kind::uniform},
         {"piecewise", timeloop::InitialCondition::Kind::piecewise}});
    r.number("u1", ic.u1);
    r.number("u2", ic.u2);
    r.number("lambda_n0", ic.lambda_n0);
    r.number("lambda_s0", ic.lambda_s0);
    if (r.has("blocks")) {
        const json& arr = r.raw("blocks");
        if (!arr.is_array()) throw ConfigError(r.key_path("blocks"), "expected an array");
        ic.blocks.clear();
        for (std::size_t k = 0; k < arr.size(); ++k) {
            Reader b(arr[k], r.key_path("blocks") + "[" + std::to_string(k) + "]");
            timeloop::Block block;
            b.number("x_lo", block.x_lo);
            b.number("x_hi", block.x_hi);
            b.number("u1", block.u1);
            b.number("u2", block.u2);
            b.finish();
            ic.blocks.push_back(block);
        }
    }
}

// Semantic checks reported under the section they belong to.
template <typename F>
void check_section(const std::string& section, F&& check) {
    try {
        check();
    } catch (const DomainError& e) {
        throw ConfigError(section, e.what());
    }
}

}  // namespace

convergence::SweepConfig RunConfig::sweep() const {
    if (!convergence) throw ConfigError("convergence", "section required for a sweep");
    convergence::SweepConfig s;
    s.mode = convergence->mode;
    s.base = sim;
    s.step0 = convergence->step0;
    s.levels = convergence->levels;
    s.reference = convergence->reference;
    s.parallel = convergence->parallel;
    return s;
}

RunConfig from_json(const json& doc) {
    Reader root(doc, "");
    if (!root.has("schema_version")) throw ConfigError("schema_version", "missing");
    int version = 0;
    root.integer("schema_version", version);
    if (version != kSchemaVersion) {
        throw ConfigError("schema_version", "unsupported version " + std::to_string(version) +
                                                " (expected " + std::to_string(kSchemaVersion) + ")");
    }

    RunConfig cfg;
    auto& sim = cfg.sim;
    root.string("name", cfg.name);

    root.object("grid", [&](Reader& r) {
        int cells = sim.grid.cells();
        r.integer("cells", cells);
        check_section(r.key_path("cells"), [&] { sim.grid = Grid(cells); });
    });
    root.object("time", [&](Reader& r) {
        r.number("tau", sim.tau);
        r.number("t_end", sim.t_end);
        r.integer("output_every", sim.output_every);
        r.boolean("allow_short_last_step", sim.allow_short_last_step);
        r.integer("max_halvings", sim.max_halvings);
        r.boolean("extrapolate_guess", sim.extrapolate_guess);
    });
    root.object("model", [&](Reader& r) {
        auto& p = sim.params;
        r.number("alpha1", p.alpha1);
        r.number("alpha2", p.alpha2);
        r.number("beta1", p.beta1);
        r.number("beta2", p.beta2);
        r.number("D1", p.D1);
        r.number("D2", p.D2);
        r.number("lambda_n_max", p.lambda_n_max);
        r.number("lambda_s_max", p.lambda_s_max);
        p.V1 = read_potential(r, "V1", p.V1);
        p.V2 = read_potential(r, "V2", p.V2);
    });
    root.object("initial", [&](Reader& r) { read_initial(r, sim.initial); });
    root.object("newton", [&](Reader& r) {
        r.number("tol", sim.newton.tol);
        r.integer("max_iter", sim.newton.max_iter);
        r.number("damping_exponent", sim.newton.damping_exponent);
        std::string mode = sim.newton.damping_mode == newton::DampingMode::capped_increment
                               ? "capped_increment"
                               : "paper_normalized";
        r.string("damping_mode", mode);
        sim.newton.damping_mode = choose<newton::DampingMode>(
            r.key_path("damping_mode"), mode,
            {{"capped_increment", newton::DampingMode::capped_increment},
             {"paper_normalized", newton::DampingMode::paper_normalized}});
    });
    root.object("steady", [&](Reader& r) {
        r.number("threshold", cfg.steady.threshold);
        r.number("flux_tol", cfg.steady.flux_tol);
        if (!(cfg.steady.threshold > 0.0)) throw ConfigError(r.key_path("threshold"), "must be > 0");
        if (!(cfg.steady.flux_tol > 0.0)) throw ConfigError(r.key_path("flux_tol"), "must be > 0");
    });
    root.object("convergence", [&](Reader& r) {
        ConvergenceOptions c;
        std::string mode = "time";
        r.string("mode", mode);
        c.mode = choose<convergence::Mode>(r.key_path("mode"), mode,
                                           {{"time", convergence::Mode::time},
                                            {"space", convergence::Mode::space}});
        r.number("step0", c.step0);
        r.integer("levels", c.levels);
        r.number("reference", c.reference);
        r.boolean("parallel", c.parallel);
        cfg.convergence = c;
    });
    root.finish();

    for (const auto& [key, V] : {std::pair{"model.V1", &sim.params.V1}, {"model.V2", &sim.params.V2}}) {
        if (V->is_tabulated() && static_cast<int>(V->face_slopes().size()) != sim.grid.faces()) {
            throw ConfigError(std::string(key) + ".face_slopes",
                              "needs one entry per face (" + std::to_string(sim.grid.faces()) + ")");
        }
    }

    check_section("model", [&] { sim.params.validate(); });
    check_section("newton", [&] { sim.newton.validate(); });
    check_section("time", [&] { sim.step_count(); });
    check_section("initial", [&] { sim.validate(); });
    if (cfg.convergence) check_section("convergence", [&] { cfg.sweep().validate(); });
    return cfg;
}

json to_json(const RunConfig& cfg) {
    const auto& sim = cfg.sim;
    const auto& p = sim.params;
    json initial = {
        {"kind", sim.initial.kind == timeloop::InitialCondition::Kind::uniform ? "uniform" : "piecewise"},
        {"lambda_n0", sim.initial.lambda_n0},
        {"lambda_s0", sim.initial.lambda_s0},
    };
    if (sim.initial.kind == timeloop::InitialCondition::Kind::uniform) {
        initial["u1"] = sim.initial.u1;
        initial["u2"] = sim.initial.u2;
    } else {
        json blocks = json::array();
        for (const auto& b : sim.initial.blocks) {
            blocks.push_back({{"x_lo", b.x_lo}, {"x_hi", b.x_hi}, {"u1", b.u1}, {"u2", b.u2}});
        }
        initial["blocks"] = blocks;
    }
    json doc = {
        {"schema_version", kSchemaVersion},
        {"name", cfg.name},
        {"grid", {{"cells", sim.grid.cells()}}},
        {"time",
         {{"tau", sim.tau},
          {"t_end", sim.t_end},
          {"output_every", sim.output_every},
          {"allow_short_last_step", sim.allow_short_last_step},
          {"max_halvings", sim.max_halvings},
          {"extrapolate_guess", sim.extrapolate_guess}}},
        {"model",
         {{"alpha1", p.alpha1},
          {"alpha2", p.alpha2},
          {"beta1", p.beta1},
          {"beta2", p.beta2},
          {"D1", p.D1},
          {"D2", p.D2},
          {"lambda_n_max", p.lambda_n_max},
          {"lambda_s_max", p.lambda_s_max},
          {"V1", potential_json(p.V1)},
          {"V2", potential_json(p.V2)}}},
        {"initial", initial},
        {"newton",
         {{"tol", sim.newton.tol},
          {"max_iter", sim.newton.max_iter},
          {"damping_exponent", sim.newton.damping_exponent},
          {"damping_mode", sim.newton.damping_mode == newton::DampingMode::capped_increment
                               ? "capped_increment"
                               : "paper_normalized"}}},
        {"steady", {{"threshold", cfg.steady.threshold}, {"flux_tol", cfg.steady.flux_tol}}},
    };
    if (cfg.convergence) {
        const auto& c = *cfg.convergence;
        doc["convergence"] = {{"mode", c.mode == convergence::Mode::time ? "time" : "space"},
                              {"step0", c.step0},
                              {"levels", c.levels},
                              {"reference", c.reference},
                              {"parallel", c.parallel}};
    }
    return doc;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
}

RunConfig load(const std::filesystem::path& path) { return from_json(read_json_file(path)); }

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(assignment, "override must look like key.path=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json* node = &doc;
    std::string walked;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError(path, "empty path component");
        if (!node->is_object()) throw ConfigError(walked, "is not an object");
        walked = join(walked, key);
        if (dot == std::string::npos) {
            json value = json::parse(text, nullptr, false);
            (*node)[key] = value.is_discarded() ? json(text) : value;
            return;
        }
        if (!node->contains(key)) throw ConfigError(walked, "no such section");
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::filesystem::path preset_dir() {
    if (const char* env = std::getenv("VESICLE_PRESET_DIR"); env && *env) return env;
    return VESICLE_SOURCE_PRESET_DIR;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    const auto dir = preset_dir();
    if (!std::filesystem::is_directory(dir)) return names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::filesystem::path preset_path(const std::string& name) {
    const auto path = preset_dir() / (name + ".json");
    if (!std::filesystem::exists(path)) {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("preset", "unknown preset '" + name + "' (available: " + known + ")");
    }
    return path;
}

}  // namespace vesicle::config
