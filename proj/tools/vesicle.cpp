#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vesicle/app.hpp"
#include "vesicle/errors.hpp"

namespace {

struct Source {
    std::string config;
    std::string preset;
    std::vector<std::string> overrides;
    std::string out = "out";

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "Configuration file (JSON)");
        cmd->add_option("--preset", preset, "Shipped preset name (see `presets list`)");
        cmd->add_option("--override", overrides, "Dot-path override, e.g. time.tau=1e-3")
            ->take_all();
        cmd->add_option("--out", out, "Output directory")->capture_default_str();
    }

    vesicle::config::RunConfig resolve() const {
        return vesicle::app::resolve_config(
            config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config),
            preset.empty() ? std::nullopt : std::optional<std::string>(preset), overrides);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-species vesicle transport simulator"};
    app.require_subcommand(1);

    Source run_src;
    auto* run = app.add_subcommand("run", "Run one simulation");
    run_src.attach(run);

    Source conv_src;
    std::string mode;
    auto* conv = app.add_subcommand("converge", "Run a convergence sweep");
    conv_src.attach(conv);
    conv->add_option("--mode", mode, "Overrides convergence.mode")
        ->check(CLI::IsMember({"time", "space"}));

    auto* validate = app.add_subcommand("validate", "Run the invariant suite");

    auto* presets = app.add_subcommand("presets", "Preset files");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "List shipped presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return vesicle::app::run(run_src.resolve(), run_src.out, std::cout);
        }
        if (conv->parsed()) {
            if (!mode.empty()) conv_src.overrides.push_back("convergence.mode=\"" + mode + "\"");
            return vesicle::app::converge(conv_src.resolve(), conv_src.out, std::cout);
        }
        if (validate->parsed()) return vesicle::app::validate(std::cout);
        if (list->parsed()) {
            for (const auto& name : vesicle::config::preset_names()) std::cout << name << '\n';
            return vesicle::app::kOk;
        }
    } catch (const vesicle::config::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return vesicle::app::kConfigError;
    } catch (const vesicle::DomainError& e) {
        std::cerr << "config: " << e.what() << '\n';
        return vesicle::app::kConfigError;
    }
    return vesicle::app::kOk;
}
