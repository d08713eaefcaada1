#include <string>

#include <CLI11.hpp>

#include "frbd/runner.hpp"
#include "frbd/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"FrBD viscoelastic friction models: simulation, certification and control"};
    app.set_version_flag("--version", FRBD_VERSION);
    app.require_subcommand(1);

    static const std::vector<std::pair<std::string, std::string>> commands = {
        {"simulate", "Integrate a friction model under a configured velocity input"},
        {"steady-sweep", "Tabulate the closed-form steady state over a velocity range"},
        {"presliding", "Pre-sliding hysteresis experiment (force-driven mass)"},
        {"lag", "Frictional-lag hysteresis experiment (velocity-driven)"},
        {"arm", "Closed-loop manipulator tracking with the friction observer"},
        {"calibrate", "Fit model parameters to a measured force/velocity trace"},
        {"audit", "Re-run the passivity/boundedness audit over an emitted trajectory"},
    };

    frbd::RunOptions opts;
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", opts.config_path, "Path to the run configuration")
            ->required();
        sub->add_option("--out", opts.out_dir, "Output directory (default: current directory)");
        sub->add_option("--seed", opts.seed, "Seed for randomized audit checks (default 42)");
    }

    CLI11_PARSE(app, argc, argv);
    return frbd::run_command(app.get_subcommands().front()->get_name(), opts);
}
