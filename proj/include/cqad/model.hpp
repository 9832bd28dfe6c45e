#pragma once

#include <optional>

#include "cqad/idt.hpp"
#include "cqad/materials.hpp"

namespace cqad {

struct TransmonParams {
    double C_J = 0.0;      // F
    double L_J0 = 0.0;     // H at zero flux
    double C_g = 0.0;      // F, 0 disables the gate
    double Z_el = 50.0;    // Ohm
    double phi_ext = 0.0;  // units of the flux quantum
};

void validate(const TransmonParams& atom);

// L_J = Phi_0^2 / (4 pi^2 E_J).
double josephson_inductance(double E_J);

// L_J0 / cos(2 pi phi). Throws FluxDivergenceError / FluxBranchError.
double flux_inductance(double L_J0, double phi_ext);

struct ModelOptions {
    bool approx_csigma = false;        // C_sigma = n C_c
    std::optional<double> omega_ref;   // Z0 reference; default omega_IDT
    bool per_frequency_z0 = false;     // Z0(omega) = Z0(omega_ref) omega_ref / omega
};

// Immutable composition of material, IDT and atom with derived circuit values.
class SystemModel {
public:
    SystemModel(const MaterialParams& mat, const IdtGeometry& geom, const TransmonParams& atom,
                const ModelOptions& opt = {});

    const MaterialParams& mat() const { return mat_; }
    const IdtGeometry& geom() const { return geom_; }
    const TransmonParams& atom() const { return atom_; }
    const ModelOptions& options() const { return opt_; }

    int n() const { return geom_.n; }
    double Z0() const { return Z0_; }
    double C_c() const { return C_c_; }
    double C_sigma() const { return C_sigma_; }
    double L() const { return L_; }  // L_J at the current flux
    double tau() const { return tau_; }
    double omega_idt() const { return omega_idt_; }
    double omega_0() const { return omega_0_; }
    double omega_ref() const { return omega_ref_; }
    bool approx_csigma() const { return opt_.approx_csigma; }
    bool gate_enabled() const { return atom_.C_g > 0.0; }

    SystemModel with_flux(double phi_ext) const;
    SystemModel with_atom(const TransmonParams& atom) const;
    SystemModel with_material(const MaterialParams& mat) const;

private:
    MaterialParams mat_;
    IdtGeometry geom_;
    TransmonParams atom_;
    ModelOptions opt_;
    double Z0_, C_c_, C_sigma_, L_, tau_, omega_idt_, omega_0_, omega_ref_;
};

// Picks L_J0 so that omega_0 = target at the atom's current flux
// (default target omega_IDT).
SystemModel lock_to_idt(const SystemModel& model, std::optional<double> target = std::nullopt);

// Flux in [0, 1/4) at which omega_0(phi) = target; requires omega_0(0) >= target.
double flux_for_frequency(const SystemModel& model, double target);

}  // namespace cqad
