#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "modgrav/commands.hpp"
#include "modgrav/errors.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_path;
    std::string grid;
    std::string metric;
    std::string probe_screening;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file (omit for defaults)");
    cmd->add_option("--out", args.out_path, "output path (scan base path / report file)");
    cmd->add_option("--grid", args.grid, "grid resolution NX,NY");
    cmd->add_option("--metric", args.metric,
                    "sigma_mod|sigma_const|kappa_const|kappa_mod|force_ratio");
    cmd->add_option("--probe-screening", args.probe_screening,
                    "on|off: include screening from the spherical probe")
        ->check(CLI::IsMember({"on", "off"}));
}

modgrav::CommandOptions build_options(const CliArgs& args) {
    modgrav::CommandOptions opts;
    opts.out_path = args.out_path;
    if (!args.grid.empty()) {
        const auto comma = args.grid.find(',');
        try {
            if (comma == std::string::npos) {
                opts.grid_nx = opts.grid_ny = std::stoi(args.grid);
            } else {
                opts.grid_nx = std::stoi(args.grid.substr(0, comma));
                opts.grid_ny = std::stoi(args.grid.substr(comma + 1));
            }
        } catch (const std::exception&) {
            throw modgrav::validation_error("--grid expects NX,NY");
        }
        if (opts.grid_nx < 2 || opts.grid_ny < 2)
            throw modgrav::validation_error("--grid values must be >= 2");
    }
    if (!args.metric.empty()) opts.metric = modgrav::metric_from_name(args.metric);
    if (!args.probe_screening.empty()) opts.probe_screening = args.probe_screening == "on";
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensitivity of a quantum optomechanical sensor to Yukawa- and "
                 "chameleon-type modifications of gravity"};
    app.require_subcommand(1);

    CliArgs args;
    const char* commands[] = {"sensitivity",    "screening", "scan-yukawa",
                              "scan-chameleon", "casimir",   "verify-qfi"};
    const char* descriptions[] = {
        "closed-form sensitivities and force resolutions",
        "background field state and screening of source and probe",
        "scan the (alpha, lambda) plane and extract exclusion boundaries",
        "scan the (M/M_P, Lambda) plane and extract exclusion boundaries",
        "thermal Casimir force between source and probe",
        "cross-check quadrature sensitivities against the closed forms",
    };
    for (size_t i = 0; i < std::size(commands); ++i)
        add_common_options(app.add_subcommand(commands[i], descriptions[i]), args);

    CLI11_PARSE(app, argc, argv);

    try {
        const modgrav::RunConfig cfg = args.config_path.empty()
                                           ? modgrav::default_config()
                                           : modgrav::load_config(args.config_path);
        const modgrav::CommandOptions opts = build_options(args);
        const std::string command = app.get_subcommands().front()->get_name();
        return modgrav::execute(command, cfg, opts, std::cout);
    } catch (const modgrav::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
