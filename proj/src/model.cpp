#include "cqad/model.hpp"

#include <cmath>

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad {

void validate(const TransmonParams& atom) {
    if (!(atom.C_J >= 0.0)) throw DomainError("C_J must be non-negative");
    if (!(atom.L_J0 > 0.0)) throw DomainError("L_J0 must be positive");
    if (!(atom.C_g >= 0.0)) throw DomainError("C_g must be non-negative");
    if (!(atom.Z_el > 0.0)) throw DomainError("Z_el must be positive");
    if (!std::isfinite(atom.phi_ext)) throw DomainError("phi_ext must be finite");
}

double josephson_inductance(double E_J) {
    if (!(E_J > 0.0)) throw DomainError("E_J must be positive");
    return flux_quantum * flux_quantum / (4.0 * pi * pi * E_J);
}

double flux_inductance(double L_J0, double phi_ext) {
    const double c = std::cos(two_pi * phi_ext);
    if (std::abs(c) < 1e-9) throw FluxDivergenceError("L_J diverges at phi_ext = " + std::to_string(phi_ext));
    if (c < 0.0) throw FluxBranchError("phi_ext = " + std::to_string(phi_ext) + " gives negative L_J");
    return L_J0 / c;
}

SystemModel::SystemModel(const MaterialParams& mat, const IdtGeometry& geom, const TransmonParams& atom,
                         const ModelOptions& opt)
    : mat_(mat), geom_(geom), atom_(atom), opt_(opt) {
    validate(mat_);
    validate(geom_);
    validate(atom_);
    tau_ = idt_delay(geom_, mat_);
    omega_idt_ = idt_center_frequency(tau_);
    omega_ref_ = opt_.omega_ref.value_or(omega_idt_);
    Z0_ = characteristic_impedance(mat_, geom_.W, omega_ref_);
    C_c_ = coupling_capacitance(mat_, geom_.W, geom_.style);
    C_sigma_ = geom_.n * C_c_ + (opt_.approx_csigma ? 0.0 : atom_.C_J + atom_.C_g);
    L_ = flux_inductance(atom_.L_J0, atom_.phi_ext);
    omega_0_ = 1.0 / std::sqrt(L_ * C_sigma_);
}

SystemModel SystemModel::with_flux(double phi_ext) const {
    TransmonParams a = atom_;
    a.phi_ext = phi_ext;
    return SystemModel(mat_, geom_, a, opt_);
}

SystemModel SystemModel::with_atom(const TransmonParams& atom) const { return SystemModel(mat_, geom_, atom, opt_); }

SystemModel SystemModel::with_material(const MaterialParams& mat) const {
    return SystemModel(mat, geom_, atom_, opt_);
}

SystemModel lock_to_idt(const SystemModel& model, std::optional<double> target) {
    const double w = target.value_or(model.omega_idt());
    if (!(w > 0.0)) throw DomainError("lock target must be positive");
    TransmonParams a = model.atom();
    const double L = 1.0 / (w * w * model.C_sigma());
    a.L_J0 = L * std::cos(two_pi * a.phi_ext);
    if (!(a.L_J0 > 0.0)) throw FluxBranchError("cannot lock at this flux");
    return model.with_atom(a);
}

double flux_for_frequency(const SystemModel& model, double target) {
    const double w00 = 1.0 / std::sqrt(model.atom().L_J0 * model.C_sigma());
    // omega_0(phi) = w00 sqrt(cos(2 pi phi))
    const double c = (target / w00) * (target / w00);
    if (!(c > 0.0 && c <= 1.0)) throw DomainError("target frequency not reachable by flux tuning");
    return std::acos(c) / two_pi;
}

}  // namespace cqad
