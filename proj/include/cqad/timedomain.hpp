#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cqad/response.hpp"

namespace cqad {

enum class Port { left, right, gate };
enum class DriveKind { none, impulse, gaussian_pulse, cw };

// Incoming flux waveform on one port. Zero-valued fields take defaults when the
// delay system is built: impulse t0 = 12 dt; pulse centre omega_IDT,
// sigma_omega = 0.2 omega_IDT, t0 = 8 / sigma_omega; cw ramp 20 periods.
struct Drive {
    DriveKind kind = DriveKind::none;
    Port port = Port::left;
    double amplitude = 1.0;
    double center_omega = 0.0;
    double bandwidth = 0.0;  // sigma_omega of a gaussian pulse
    double t0 = 0.0;
    double ramp = 0.0;
    long delay_steps = 0;    // integer shift applied on top of t0

    static Drive impulse(Port p = Port::left);
    static Drive gaussian_pulse(double center_omega = 0.0, double bandwidth = 0.0, Port p = Port::left);
    static Drive cw(double omega, Port p = Port::left);
};

// Value of a resolved drive at continuous time t, before the delay_steps shift.
double drive_waveform(const Drive& d, double t);

enum class StepRule {
    exponential,  // exact 2x2 propagator, 6-point interpolated forcing
    trapezoidal,  // A-stable, second order
};

struct DelayOptions {
    StepRule rule = StepRule::exponential;
    // Without the gate port the gate line is a short: C_g stays in C_sigma but
    // loads nothing, which is the setting of acoustic_reflection.
    bool gate_port = false;
};

struct DelaySystem {
    SystemModel model;
    double dt;
    int steps_per_tau;          // tau = steps_per_tau * dt
    std::size_t history_depth;  // (n-1) m + margin
    Drive drive;
    StepRule rule;
    bool gate_port;
    std::vector<int> a_stencil;  // coefficients of p(t - k tau), k = 0..n-1
    std::vector<int> h_stencil;
    double kappa_a;  // Z0 C_c^2 / (2 C_sigma^2)
    double kappa_g;  // Z_el C_g^2 / C_sigma^2, or 0
    Eigen::Matrix2d propagator;
    Eigen::Matrix<double, 2, 6> weights;  // forcing samples at steps k-2..k+3
};

// dt snaps to tau / ceil(tau / dt_target).
DelaySystem build_delay_system(const SystemModel& model, double dt_target, const Drive& drive,
                               const DelayOptions& opt = {});

struct TimeTrace {
    Eigen::ArrayXd t;
    Eigen::ArrayXd pJ;
    Eigen::ArrayXd phi_out_left, phi_out_right, phi_out_gate;
    Eigen::ArrayXd phi_in_left, phi_in_right, phi_in_gate;

    Eigen::Index size() const { return t.size(); }
};

// Fixed-step integration from rest. Throws InstabilityError on blow-up.
TimeTrace integrate(const DelaySystem& sys, double duration);

// Doubles the duration until p_J and the outputs have decayed to rel_tol of
// their peak over the final stretch.
TimeTrace integrate_to_ringdown(const DelaySystem& sys, double rel_tol = 1e-10, double max_duration = 0.0);

struct TimeDomainScattering {
    ResponseSpectrum reflection;    // r_ac, or r_g for a gate drive
    ResponseSpectrum transmission;  // t_ac, or t_ac_g for a gate drive
    double margin_db;               // weakest in-band drive component vs. its peak
    TimeTrace trace;
};

// Spectral quotients of output over input on [omega_lo, omega_hi], shifted to the
// frequency-domain reference planes. Throws CoverageError below -20 dB.
TimeDomainScattering scattering_from_time_domain(const DelaySystem& sys, double omega_lo, double omega_hi);
TimeDomainScattering scattering_from_trace(const DelaySystem& sys, const TimeTrace& trace, double omega_lo,
                                           double omega_hi);

struct EnergyReport {
    double in = 0.0;
    double out_left = 0.0, out_right = 0.0, out_gate = 0.0;
    double ratio = 0.0;  // total out / in
    bool conserved = false;
    std::string describe() const;
};

// Port energies from spectra, weight omega^2 / Z per port.
EnergyReport energy_audit(const TimeTrace& trace, const DelaySystem& sys, double tol = 1e-6);
// Throws ConservationError carrying the per-port breakdown.
void require_conserved(const EnergyReport& report);

// Running energies from time-domain power (dphi/dt)^2 / Z, both sides.
struct EnergyHistory {
    Eigen::ArrayXd in, out;
};
EnergyHistory cumulative_energy(const TimeTrace& trace, const DelaySystem& sys);

// 2^k >= n.
Eigen::Index next_pow2(Eigen::Index n);

}  // namespace cqad
