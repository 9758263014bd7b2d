#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stml/commands.hpp"
#include "stml/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Inelastic tunneling current maps, bias sweeps and detection kinetics for molecular transitions"};
    app.set_version_flag("--version", std::string(stml::version));
    app.require_subcommand(1);

    std::string config;
    std::string out = ".";
    std::optional<unsigned> threads;
    bool log10 = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run configuration (defaults when omitted)")->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Output directory")->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads, 0 = all cores (fallback: STML_THREADS)");
    };
    add_common(app.add_subcommand("density-info", "Charge, transition dipole and grid statistics per channel"));
    auto* map = app.add_subcommand("map", "Constant-height current map (raw CSV, normalized CSV, PGM)");
    add_common(map);
    map->add_flag("--log10", log10, "Log10 normalization of the map outputs");
    add_common(app.add_subcommand("bias-sweep", "Total current versus bias at a fixed tip position"));
    add_common(app.add_subcommand("kinetics", "Steady-state photon rate and optional population trajectory"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : stml::cli::exit_usage;
    }

    stml::cli::RunOptions options;
    options.out_dir = out;
    options.threads = threads;
    options.log10 = log10;
    return stml::cli::run(app.get_subcommands().front()->get_name(), config, options, std::cout, std::cerr);
}
