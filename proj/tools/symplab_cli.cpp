/// @file symplab_cli.cpp
/// Command-line front end: argument parsing only, the work happens in symplab::cli::run.

#include "symplab/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"symplab: verification campaigns for commuting symplectomorphisms, quasimorphisms and extensions"};
    app.require_subcommand(1);

    symplab::cli::Options opt;
    std::string config, out_dir, format = "json";
    std::uint64_t seed = 0;
    double scale = 1.0;

    const std::map<std::string, std::string> commands{
        {"verify-lemmas", "strip fields, Hamiltonian integrals, fluxes, commutator identities, Calabi values, area"},
        {"main-theorem-demo", "fluxes and oracle values of gamma_m, cup-product slope, commuting library"},
        {"extend-demo", "extension of a quasimorphism from G to Ghat with restriction, defect and shift checks"},
        {"plot-fields", "CSV and SVG quiver plots of Y_c, Y'_d, X_A, X'_A and the conjugated flows"},
        {"qm-report", "Brooks quasimorphisms: exact defects and homogenization bounds"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON config file (built-in default when omitted)")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "directory for the report and plot files");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--tolerance-scale", scale, "multiply every tolerance by this factor")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--config")) opt.config = config;
    if (sub->count("--out")) opt.out_dir = out_dir;
    if (sub->count("--seed")) opt.seed = seed;
    opt.tolerance_scale = scale;
    opt.format = format == "csv" ? symplab::cli::Format::csv : symplab::cli::Format::json;
    try {
        return symplab::cli::run(sub->get_name(), opt, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
