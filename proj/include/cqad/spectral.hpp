#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cqad/response.hpp"

namespace cqad {

struct CriterionResult {
    double lhs;                  // 0.5 pi K2 n^2
    bool satisfied;              // lhs >= 1
    double gamma0_over_omega0;   // 0.5 n K2
    double gamma0_T0;            // gamma_0 n tau = pi K2 n^2, logged only
};

CriterionResult cavity_criterion(double K2, int n);
// Smallest n with lhs >= 1; empty for K2 = 0.
std::optional<int> minimal_cavity_n(double K2);

struct Peak {
    double omega;
    double height;
    double fwhm;  // NaN when half maximum is not reached on one side
};

// Local maxima with 3-point quadratic refinement; FWHM by linear interpolation.
std::vector<Peak> find_peaks(const Eigen::ArrayXd& grid, const Eigen::ArrayXd& y);

// Distance between the two highest |chi|^2 peaks. Throws NotSplitError.
double splitting(const SystemModel& model, Eigen::Index points = 20001);

// Rectangle in complex omega, e^{-i omega t} convention (poles have Im < 0).
struct ComplexRegion {
    double re_min, re_max, im_min, im_max;
};

// Re in omega_IDT [1 - 1.5/n, 1 + 1.5/n] (stretched to cover omega_0),
// Im in -omega_IDT [min(0.6/n, 0.95), -0.05/n]: deep enough for the atomic poles,
// shallow enough to leave out the IDT's own overdamped modes below threshold.
ComplexRegion default_pole_region(const SystemModel& model);

enum class Regime { single, split };
std::string to_string(Regime r);

struct PoleSet {
    std::vector<std::complex<double>> poles;  // sorted by real part
    std::vector<double> residual_norms;       // |denominator(conj(pole))|
    ComplexRegion search_region;
    Regime classification;
    int zero_count;  // argument-principle count in the region
};

struct PoleSearchOptions {
    int re_points = 400;
    int im_points = 200;
    int max_refinements = 3;
    int max_newton = 60;
};

// Zeros of the denominator in the region. Two least-damped poles decide the
// regime: split when they are further apart in Re than in Im.
PoleSet find_poles(const SystemModel& model, const ComplexRegion& region, const PoleSearchOptions& opt = {});
PoleSet find_poles(const SystemModel& model);

// Winding number of the denominator around the region boundary.
int count_zeros(const SystemModel& model, const ComplexRegion& region);

struct RealRoot {
    double omega;
    double slope;          // d/domega of omega^2 - omega_0^2 + Im[gamma] omega
    double damping_ratio;  // Re[gamma](omega) / max over the main lobe
    bool suppressed;       // slope <= 0
};

// Roots of omega^2 - omega_0^2 + Im[gamma_n] omega on
// [min(omega_IDT, omega_0)(1 - 1/n), max(omega_IDT, omega_0)(1 + 1/n)].
std::vector<RealRoot> real_axis_resonances(const SystemModel& model);

struct FluxMap {
    Observable observable;
    Eigen::ArrayXd flux_grid;   // phi_ext / Phi_0
    Eigen::ArrayXd freq_grid;   // rad/s
    Eigen::MatrixXd values;     // |observable|^2, rows = flux; NaN rows invalid
    // r_g only: (1 - |r_g|^2) normalized to its maximum over valid entries.
    Eigen::MatrixXd inverted;
    std::vector<std::string> row_errors;  // empty string for valid rows

    bool row_valid(Eigen::Index i) const { return row_errors[static_cast<std::size_t>(i)].empty(); }
};

// observable is r_g or r_ac.
FluxMap flux_map(const SystemModel& model, const Eigen::ArrayXd& flux_grid, const Eigen::ArrayXd& freq_grid,
                 Observable observable);

// 1 - |r_g|^2 = 4 gamma_g Re[gamma_n] omega^2 / |D_g|^2, free of cancellation.
double gate_absorption(const SystemModel& model, double omega);

}  // namespace cqad
