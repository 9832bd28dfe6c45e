#include <iostream>

#include <CLI11.hpp>

#include "cqad/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace cqad::cli;
    CLI::App app{"Transmon-IDT surface acoustic wave model"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string scenario, out_dir = ".", materials;
    int points = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", scenario, "Scenario JSON file");
        sub->add_option("--out-dir", out_dir, "Directory for CSV/SVG/JSON output");
        sub->add_option("--points", points, "Frequency grid points (overrides the scenario)");
        sub->add_flag("--approx-csigma", common.approx_csigma, "Use C_sigma = n C_c");
        sub->add_option("--materials", materials, "Material database JSON");
    };

    auto* spectrum = app.add_subcommand("spectrum", "Response spectra (CSV + SVG)");
    auto* criterion = app.add_subcommand("criterion", "Cavity-criterion table");
    auto* poles = app.add_subcommand("poles", "Complex poles of the charge response (JSON)");
    auto* fluxmap = app.add_subcommand("fluxmap", "Flux-tuned reflection maps (CSV + SVG)");
    auto* timedomain = app.add_subcommand("timedomain", "Time-domain oracle run");
    auto* mats = app.add_subcommand("materials", "Material database");
    for (auto* s : {spectrum, criterion, poles, fluxmap, timedomain, mats}) add_common(s);
    mats->add_subcommand("list", "Print the database")->required(false);

    CriterionOptions copt;
    std::string material, n_range;
    double K2 = -1.0;
    criterion->add_option("--material", material, "Material name");
    criterion->add_option("--K2", K2, "Override K2 (fraction)");
    criterion->add_option("--n", n_range, "n range lo:hi (default 1:40)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    if (!scenario.empty()) common.scenario = scenario;
    if (!materials.empty()) common.materials = materials;
    if (points != 0) common.points = points;
    common.out_dir = out_dir;
    if (!material.empty()) copt.material = material;
    if (K2 >= 0.0) copt.K2 = K2;

    return guarded(
        [&]() -> int {
            if (!n_range.empty()) {
                const auto c = n_range.find(':');
                try {
                    copt.n_lo = std::stoi(n_range.substr(0, c));
                    copt.n_hi = c == std::string::npos ? copt.n_lo : std::stoi(n_range.substr(c + 1));
                } catch (const std::exception&) {
                    throw cqad::ConfigError("--n", "expected lo:hi");
                }
            }
            if (spectrum->parsed()) return cmd_spectrum(common, std::cout);
            if (criterion->parsed()) return cmd_criterion(common, copt, std::cout);
            if (poles->parsed()) return cmd_poles(common, std::cout);
            if (fluxmap->parsed()) return cmd_fluxmap(common, std::cout);
            if (timedomain->parsed()) return cmd_timedomain(common, std::cout);
            return cmd_materials_list(common, std::cout);
        },
        std::cerr);
}
