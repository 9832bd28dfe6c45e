#include "cqad/response.hpp"

#include <cmath>

#include "cqad/errors.hpp"

namespace cqad {

namespace {

constexpr cplx I(0.0, 1.0);

void require_positive(double omega) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
}

void require_gate(const SystemModel& model) {
    if (!model.gate_enabled()) throw GateDisabledError("gate disabled (C_g = 0)");
}

double kappa0(const SystemModel& m) {
    return m.C_c() * m.C_c() / (2.0 * m.L() * m.C_sigma() * m.C_sigma());
}

}  // namespace

cplx line_impedance_at(const SystemModel& model, cplx omega) {
    if (!model.options().per_frequency_z0) return model.Z0();
    return model.Z0() * model.omega_ref() / omega;
}

cplx damping(const SystemModel& model, cplx omega) {
    return line_impedance_at(model, omega) * kappa0(model) * h_factor(model.n(), omega, model.tau());
}

cplx damping_derivative(const SystemModel& model, cplx omega) {
    const cplx z = line_impedance_at(model, omega);
    const cplx dh = h_factor_derivative(model.n(), omega, model.tau());
    cplx d = z * kappa0(model) * dh;
    if (model.options().per_frequency_z0) d -= z / omega * kappa0(model) * h_factor(model.n(), omega, model.tau());
    return d;
}

double gate_damping(const SystemModel& model) {
    const double cs = model.C_sigma();
    return model.atom().C_g * model.atom().C_g * model.atom().Z_el / (model.L() * cs * cs);
}

double normalized_decay(double K2, int n) {
    if (!(K2 >= 0.0 && K2 < 1.0)) throw DomainError("K2 must lie in [0, 1)");
    if (n < 1) throw DomainError("n must be >= 1");
    return 0.5 * n * K2;
}

cplx denominator(const SystemModel& model, cplx omega) {
    const double w0 = model.omega_0();
    return omega * omega - w0 * w0 - I * damping(model, omega) * omega;
}

cplx denominator_derivative(const SystemModel& model, cplx omega) {
    return 2.0 * omega - I * (damping(model, omega) + damping_derivative(model, omega) * omega);
}

cplx loaded_denominator(const SystemModel& model, cplx omega) {
    return denominator(model, omega) - I * gate_damping(model) * omega;
}

cplx charge_response(const SystemModel& model, double omega) {
    require_positive(omega);
    return 1.0 / denominator(model, omega);
}

cplx acoustic_reflection(const SystemModel& model, double omega) {
    require_positive(omega);
    const cplx g = damping(model, omega);
    if (g.real() == 0.0) return 0.0;
    return I * g.real() * omega / (omega * omega - model.omega_0() * model.omega_0() - I * g * omega);
}

cplx acoustic_transmission(const SystemModel& model, double omega) {
    const cplx r = acoustic_reflection(model, omega);
    return std::exp(-I * (omega * model.tau() * model.n())) * (1.0 + r);
}

cplx gate_reflection(const SystemModel& model, double omega) {
    require_positive(omega);
    require_gate(model);
    return 1.0 + 2.0 * I * gate_damping(model) * omega / loaded_denominator(model, omega);
}

cplx transduction(const SystemModel& model, double omega) {
    require_positive(omega);
    require_gate(model);
    const double cs = model.C_sigma();
    const cplx a = array_factor(model.n(), omega, model.tau());
    return I * line_impedance_at(model, omega) * model.C_c() * model.atom().C_g * a * omega /
           (model.L() * cs * cs * loaded_denominator(model, omega));
}

cplx admittance_response(const SystemModel& model, double omega) {
    require_positive(omega);
    const double w0 = model.omega_0();
    const cplx yl = 1.0 / (I * omega * model.L());
    const cplx yc = I * omega * model.C_sigma();
    const cplx ya = line_impedance_at(model, omega) * model.C_c() * model.C_c() * w0 * w0 *
                    h_factor(model.n(), omega, model.tau()) / 2.0;
    return yl / (yl + yc + ya);
}

Eigen::Matrix3cd scattering_matrix(const SystemModel& model, double omega, Normalization norm) {
    require_positive(omega);
    const double cs = model.C_sigma();
    const cplx z0 = line_impedance_at(model, omega);
    const double zel = model.atom().Z_el;
    const cplx a = array_factor(model.n(), omega, model.tau());
    const cplx dg = loaded_denominator(model, omega);
    const cplx g = z0 * model.C_c() * model.C_c() * omega / (2.0 * model.L() * cs * cs);
    const cplx refl = I * g * a * a / dg;
    const cplx through = std::exp(-I * (omega * model.tau() * (model.n() - 1)));

    Eigen::Matrix3cd s;
    s(0, 0) = s(1, 1) = refl;
    s(0, 1) = s(1, 0) = through + refl;
    if (model.gate_enabled()) {
        const cplx tg = transduction(model, omega);
        s(0, 2) = s(1, 2) = tg;
        s(2, 0) = s(2, 1) = tg * zel / z0;
        s(2, 2) = gate_reflection(model, omega);
    } else {
        s(0, 2) = s(1, 2) = s(2, 0) = s(2, 1) = 0.0;
        s(2, 2) = 1.0;
    }
    if (norm == Normalization::power) {
        const Eigen::Vector3cd sz(std::sqrt(z0), std::sqrt(z0), std::sqrt(cplx(zel)));
        s = sz.cwiseInverse().asDiagonal() * s * sz.asDiagonal();
    }
    return s;
}

std::string to_string(Observable obs) {
    switch (obs) {
        case Observable::chi: return "chi";
        case Observable::gamma_n: return "gamma_n";
        case Observable::r_ac: return "r_ac";
        case Observable::r_g: return "r_g";
        case Observable::t_ac_g: return "t_ac_g";
        case Observable::t_ac: return "t_ac";
        case Observable::admittance: return "admittance";
    }
    return "?";
}

Observable observable_from_string(const std::string& s) {
    for (auto o : {Observable::chi, Observable::gamma_n, Observable::r_ac, Observable::r_g, Observable::t_ac_g,
                   Observable::t_ac, Observable::admittance})
        if (to_string(o) == s) return o;
    throw DomainError("unknown observable '" + s + "'");
}

cplx evaluate(const SystemModel& model, Observable obs, double omega) {
    switch (obs) {
        case Observable::chi: return charge_response(model, omega);
        case Observable::gamma_n: return damping(model, omega);
        case Observable::r_ac: return acoustic_reflection(model, omega);
        case Observable::r_g: return gate_reflection(model, omega);
        case Observable::t_ac_g: return transduction(model, omega);
        case Observable::t_ac: return acoustic_transmission(model, omega);
        case Observable::admittance: return admittance_response(model, omega);
    }
    return 0.0;
}

Eigen::ArrayXd ResponseSpectrum::normalized_abs2() const {
    Eigen::ArrayXd a = abs2();
    const double m = a.size() ? a.maxCoeff() : 0.0;
    return m > 0.0 ? Eigen::ArrayXd(a / m) : a;
}

ResponseSpectrum sample(const SystemModel& model, Observable obs, const Eigen::ArrayXd& grid) {
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw DomainError("frequency grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("frequency grid must be strictly increasing");
    }
    ResponseSpectrum out{obs, grid, Eigen::ArrayXcd(grid.size())};
    for (Eigen::Index i = 0; i < grid.size(); ++i) out.values[i] = evaluate(model, obs, grid[i]);
    return out;
}

Eigen::ArrayXd relative_grid(const SystemModel& model, double lo, double hi, Eigen::Index points) {
    if (points < 2 || !(hi > lo)) throw DomainError("grid needs points >= 2 and hi > lo");
    return Eigen::ArrayXd::LinSpaced(points, lo, hi) * model.omega_idt();
}

}  // namespace cqad
