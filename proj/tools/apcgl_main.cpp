// Batch driver for the almost-periodic CGL solver: simulate, converge,
// validate and blowup workflows over a single JSON configuration.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apcgl/commands.hpp"

namespace {

apcgl::RunConfig load_config(const std::string& config_path,
                             const std::string& out_override) {
    apcgl::RunConfig config = apcgl::load_run_config(config_path);
    if (!out_override.empty()) {
        config.output_dir = out_override;
    }
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"apcgl - coefficient-space solver for the polynomial complex "
                 "Ginzburg-Landau equation on a one-sided frequency lattice"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<double> h_list;
    std::vector<double> scales;

    auto* simulate = app.add_subcommand(
        "simulate", "Run the Lie-Trotter evolution and write trajectory CSVs");
    simulate->add_option("--config", config_path, "JSON configuration file")
        ->required();
    simulate->add_option("--out", out_dir, "Output directory override");

    auto* converge = app.add_subcommand(
        "converge", "Step-size study against a pseudospectral reference");
    converge->add_option("--config", config_path, "JSON configuration file")
        ->required();
    converge->add_option("--h-list", h_list, "Descending step sizes, e.g. 0.1,0.05")
        ->required()
        ->delimiter(',');
    converge->add_option("--out", out_dir, "Output directory override");

    auto* validate = app.add_subcommand(
        "validate", "Run the cross-module invariant suite");
    validate->add_option("--config", config_path, "JSON configuration file")
        ->required();

    auto* blowup = app.add_subcommand(
        "blowup", "Scan initial-data scales for finite-time blowup");
    blowup->add_option("--config", config_path, "JSON configuration file")
        ->required();
    blowup->add_option("--scales", scales, "Positive scale factors, e.g. 0.5,1,2")
        ->required()
        ->delimiter(',');
    blowup->add_option("--out", out_dir, "Output directory override");

    CLI11_PARSE(app, argc, argv);

    try {
        const apcgl::RunConfig config = load_config(config_path, out_dir);
        if (simulate->parsed()) {
            return apcgl::cmd_simulate(config);
        }
        if (converge->parsed()) {
            return apcgl::cmd_converge(config, h_list);
        }
        if (validate->parsed()) {
            return apcgl::cmd_validate(config);
        }
        if (blowup->parsed()) {
            return apcgl::cmd_blowup(config, scales);
        }
    } catch (const apcgl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return apcgl::kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
