#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

#include "cqad/model.hpp"

namespace cqad {

using cplx = std::complex<double>;

// Z0 entering gamma at omega: the reference value, or scaled by omega_ref/omega
// when the model asks for per-frequency evaluation.
cplx line_impedance_at(const SystemModel& model, cplx omega);

// gamma_n(omega) = Z0 C_c^2 H_n(omega) / (2 L C_sigma^2).
cplx damping(const SystemModel& model, cplx omega);
cplx damping_derivative(const SystemModel& model, cplx omega);

// gamma_g = C_g^2 Z_el / (L C_sigma^2); zero without a gate.
double gate_damping(const SystemModel& model);

// 0.5 n K2.
double normalized_decay(double K2, int n);

// omega^2 - omega_0^2 - i gamma_n(omega) omega. Zeros sit in Im > 0.
cplx denominator(const SystemModel& model, cplx omega);
cplx denominator_derivative(const SystemModel& model, cplx omega);
// Same with gamma_n + gamma_g.
cplx loaded_denominator(const SystemModel& model, cplx omega);

// chi_n = 1 / denominator; p_J = chi_n V_in / L_J.
cplx charge_response(const SystemModel& model, double omega);

// i Re[gamma_n] omega / D, referred to the IDT centre; the gate counts as shorted.
cplx acoustic_reflection(const SystemModel& model, double omega);
// e^{-i omega tau n} (1 + r_ac).
cplx acoustic_transmission(const SystemModel& model, double omega);

// 1 + 2 i gamma_g omega / D_g. Throws GateDisabledError for C_g = 0.
cplx gate_reflection(const SystemModel& model, double omega);
// i Z0 C_c C_g A_n omega / (L C_sigma^2 D_g): gate drive -> outgoing acoustic flux
// at the outer coupling point. Throws GateDisabledError for C_g = 0.
cplx transduction(const SystemModel& model, double omega);

// Y_L / (Y_L + Y_C + Y_a) with Y_L = 1/(i omega L), Y_C = i omega C_sigma,
// Y_a = Z0 C_c^2 omega_0^2 H_n / 2. Equals -omega_0^2 chi_n.
cplx admittance_response(const SystemModel& model, double omega);

enum class Normalization { flux, power };

// Ports (left, right, gate); acoustic planes at the outer coupling points and the
// gate load included. Power normalization weights |phi|^2 omega^2 / (2 Z).
Eigen::Matrix3cd scattering_matrix(const SystemModel& model, double omega,
                                   Normalization norm = Normalization::power);

enum class Observable { chi, gamma_n, r_ac, r_g, t_ac_g, t_ac, admittance };

std::string to_string(Observable obs);
Observable observable_from_string(const std::string& s);

cplx evaluate(const SystemModel& model, Observable obs, double omega);

struct ResponseSpectrum {
    Observable observable = Observable::chi;
    Eigen::ArrayXd grid;
    Eigen::ArrayXcd values;

    Eigen::ArrayXd abs2() const { return values.abs2(); }
    Eigen::ArrayXd normalized_abs2() const;
};

// Grid must be strictly increasing and positive.
ResponseSpectrum sample(const SystemModel& model, Observable obs, const Eigen::ArrayXd& grid);

// omega_IDT * linspace(lo, hi, points).
Eigen::ArrayXd relative_grid(const SystemModel& model, double lo, double hi, Eigen::Index points);

}  // namespace cqad
