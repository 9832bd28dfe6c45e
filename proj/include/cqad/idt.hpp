#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "cqad/materials.hpp"

namespace cqad {

struct IdtGeometry {
    int n = 1;           // coupling points (finger pairs)
    double pitch = 0.0;  // m
    double W = 0.0;      // m
    FingerStyle style = FingerStyle::single;
};

void validate(const IdtGeometry& geom);

double idt_delay(const IdtGeometry& geom, const MaterialParams& mat);
inline double idt_center_frequency(double tau) { return 2.0 * std::numbers::pi / tau; }

// Fields carry e^{-i omega tau k}; A_n and H_n inherit that sign.

namespace detail {

// omega*tau with its real part reduced into [-pi, pi] (two-term Cody-Waite).
// H_n'(theta) grows like n^3, so the product's rounding error is carried too.
template <class Real>
std::complex<Real> reduced_phase(std::complex<Real> omega, Real tau) {
    constexpr long double two_pi_ld = 6.283185307179586476925286766559005768L;
    constexpr Real hi = static_cast<Real>(two_pi_ld);
    constexpr Real lo = static_cast<Real>(two_pi_ld - static_cast<long double>(hi));
    const Real re = omega.real() * tau;
    const Real re_err = std::fma(omega.real(), tau, -re);  // rounding of the product itself
    const Real k = std::nearbyint(re / hi);
    return {((re - k * hi) - k * lo) + re_err, omega.imag() * tau};
}

template <class Real>
std::complex<Real> cexpm1(std::complex<Real> z) {
    const Real s = std::sin(z.imag() / 2);
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// expm1(z) - z, without the cancellation of the linear term.
template <class Real>
std::complex<Real> cexpm1_minus_linear(std::complex<Real> z) {
    if (std::abs(z) >= Real(0.5)) return cexpm1(z) - z;
    std::complex<Real> acc(0);
    for (int k = 24; k >= 2; --k) acc = (acc + Real(1)) * z / Real(k);
    return acc * z;
}

}  // namespace detail

// Direct sums, each term from the reduced phase so rounding does not build up with j.
template <class Real>
std::complex<Real> array_factor_sum(int n, std::complex<Real> omega, Real tau) {
    const std::complex<Real> th = detail::reduced_phase(omega, tau);
    const std::complex<Real> mi(0, -1);
    std::complex<Real> acc(0);
    for (int k = 0; k < n; ++k) acc += std::exp(mi * Real(k) * th);
    return acc;
}

// H_n = n + sum_{j=1}^{n-1} 2 (n - j) q^j, q = e^{-i omega tau}.
template <class Real>
std::complex<Real> h_factor_sum(int n, std::complex<Real> omega, Real tau) {
    const std::complex<Real> th = detail::reduced_phase(omega, tau);
    const std::complex<Real> mi(0, -1);
    std::complex<Real> acc(0);
    for (int j = n - 1; j >= 1; --j) acc += Real(2 * (n - j)) * std::exp(mi * Real(j) * th);
    return acc + Real(n);
}


template <class Real>
std::complex<Real> array_factor(int n, std::complex<Real> omega, Real tau) {
    const std::complex<Real> th = detail::reduced_phase(omega, tau);
    const std::complex<Real> s = std::sin(th / Real(2));
    if (std::abs(s) < Real(1e-8)) return array_factor_sum(n, omega, tau);
    const std::complex<Real> i(0, 1);
    return std::exp(-i * Real(n - 1) * th / Real(2)) * std::sin(Real(n) * th / Real(2)) / s;
}

template <class Real>
std::complex<Real> array_factor(int n, Real omega, Real tau) {
    return array_factor(n, std::complex<Real>(omega), tau);
}

// Closed form 2 (e_{n+1} - (n+1) e_1) / e_1^2 - n with e_k = expm1(-i k theta).
// The linear parts of the numerator cancel exactly, so they are dropped before subtracting.
template <class Real>
std::complex<Real> h_factor(int n, std::complex<Real> omega, Real tau) {
    const std::complex<Real> th = detail::reduced_phase(omega, tau);
    if (std::abs(std::sin(th / Real(2))) < Real(1e-8)) return h_factor_sum(n, omega, tau);
    const std::complex<Real> mi(0, -1);
    const std::complex<Real> e1 = detail::cexpm1(mi * th);
    const std::complex<Real> g1 = detail::cexpm1_minus_linear(mi * th);
    const std::complex<Real> gn = detail::cexpm1_minus_linear(mi * Real(n + 1) * th);
    return Real(2) * (gn - Real(n + 1) * g1) / (e1 * e1) - Real(n);
}

template <class Real>
std::complex<Real> h_factor(int n, Real omega, Real tau) {
    return h_factor(n, std::complex<Real>(omega), tau);
}

// dH_n/domega.
template <class Real>
std::complex<Real> h_factor_derivative(int n, std::complex<Real> omega, Real tau) {
    const std::complex<Real> mi(0, -1);
    const std::complex<Real> q = std::exp(mi * omega * tau);
    std::complex<Real> acc(0), qj(1);
    for (int j = 1; j < n; ++j) {
        qj *= q;
        acc += static_cast<Real>(2 * (n - j) * j) * qj;
    }
    return mi * tau * acc;
}

// Re H ~ n^2 sinc^2 X, Im H ~ n^2 (sin 2X - 2X) / (2 X^2), X = n pi (omega - omega_idt)/omega_idt.
std::complex<double> h_factor_sinc_approx(int n, double omega, double omega_idt);

struct SpectralFactors {
    std::complex<double> A;
    std::complex<double> H;
    double omega;
};

SpectralFactors spectral_factors(int n, double omega, double tau);

Eigen::ArrayXcd array_factor(int n, const Eigen::ArrayXd& omega, double tau);
Eigen::ArrayXcd h_factor(int n, const Eigen::ArrayXd& omega, double tau);

// Integer delay-stencil coefficients: A_n -> {1, ..., 1}; H_n -> {n, 2(n-1), ..., 2}.
std::vector<int> array_factor_stencil(int n);
std::vector<int> h_factor_stencil(int n);

}  // namespace cqad
