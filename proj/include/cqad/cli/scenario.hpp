#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqad/model.hpp"
#include "cqad/response.hpp"
#include "cqad/timedomain.hpp"

namespace cqad::cli {

enum class SweepKind { frequency, flux, n, K2 };

struct Sweep {
    SweepKind kind = SweepKind::frequency;
    double lo = 0.5, hi = 1.5;
    int points = 2001;
    bool ghz = false;  // frequency ranges in GHz instead of omega_IDT units
    // flux sweeps: frequency axis
    double freq_lo = 0.8, freq_hi = 1.2;
    int freq_points = 400;
    bool freq_ghz = false;
    std::vector<Observable> observables{Observable::r_g, Observable::r_ac};
};

struct TimeDomainSettings {
    int steps_per_tau = 64;
    double sigma_over_idt = 0.2;
    bool gate_port = false;
    StepRule rule = StepRule::exponential;
    double tolerance = 1e-3;
    double energy_tolerance = 1e-6;
};

struct Scenario {
    std::string name = "scenario";
    MaterialParams material;
    IdtGeometry geometry;
    TransmonParams atom;
    bool have_inductance = false;
    bool lock_to_idt = false;
    double omega0_over_idt = 1.0;
    bool approx_csigma = false;
    std::vector<Observable> outputs{Observable::chi, Observable::r_ac, Observable::t_ac};
    std::optional<Sweep> sweep;
    TimeDomainSettings timedomain;
};

// Validates against the published schema rules; ConfigError names the field path.
Scenario parse_scenario(const nlohmann::json& j, const MaterialDatabase& db);
Scenario load_scenario(const std::filesystem::path& path, const MaterialDatabase& db);

// Desk-scale default: 3 GHz, n = 10, W = 30 um, C_J = 1 fF, C_g = 10 aF,
// Z_el = 50 Ohm, locked to omega_IDT.
Scenario default_scenario(const MaterialParams& material);

SystemModel build_model(const Scenario& s);

// Frequency grid of a sweep in rad/s.
Eigen::ArrayXd frequency_grid(const SystemModel& model, double lo, double hi, int points, bool ghz);

}  // namespace cqad::cli
