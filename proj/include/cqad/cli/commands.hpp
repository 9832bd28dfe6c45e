#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "cqad/cli/scenario.hpp"
#include "cqad/errors.hpp"

namespace cqad::cli {

enum ExitCode { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_nonconvergence = 3, exit_disagreement = 4 };

struct CommonOptions {
    std::optional<std::filesystem::path> scenario;
    std::filesystem::path out_dir = ".";
    std::optional<int> points;
    bool approx_csigma = false;
    std::optional<std::filesystem::path> materials;
};

struct CriterionOptions {
    std::optional<std::string> material;
    std::optional<double> K2;
    int n_lo = 1, n_hi = 40;
};

int cmd_spectrum(const CommonOptions& opt, std::ostream& out);
int cmd_criterion(const CommonOptions& opt, const CriterionOptions& copt, std::ostream& out);
int cmd_poles(const CommonOptions& opt, std::ostream& out);
int cmd_fluxmap(const CommonOptions& opt, std::ostream& out);
int cmd_timedomain(const CommonOptions& opt, std::ostream& out);
int cmd_materials_list(const CommonOptions& opt, std::ostream& out);

// Runs a command, mapping exceptions onto exit codes (config 2, poles 3).
template <class F>
int guarded(F&& f, std::ostream& err) {
    try {
        return f();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const PoleSearchError& e) {
        err << "pole search failed: " << e.what() << '\n';
        for (const auto& c : e.candidates) err << "  candidate " << c.real() << " " << c.imag() << '\n';
        return exit_nonconvergence;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}


MaterialDatabase load_database(const CommonOptions& opt);
Scenario resolve_scenario(const CommonOptions& opt, const MaterialDatabase& db);

}  // namespace cqad::cli
