#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "cqad/model.hpp"
#include "cqad/response.hpp"

namespace cqad::test {

inline MaterialParams gaas() { return {"GaAs", 0.0007, 3000.0, 5e-11}; }
inline MaterialParams linbo3() { return {"LiNbO3", 0.048, 3000.0, 5e-11}; }

// Desk-scale scenario: 3 GHz, W = 30 um, C_J = 1 fF, C_g = 10 aF, Z_el = 50,
// omega_0 = w0_rel * omega_IDT.
inline SystemModel desk_model(const MaterialParams& mat, int n, bool approx = false, double w0_rel = 1.0,
                              double C_g = 10e-18) {
    ModelOptions opt;
    opt.approx_csigma = approx;
    const IdtGeometry geom{n, mat.v_s / 3e9, 30e-6, FingerStyle::single};
    const SystemModel m(mat, geom, {1e-15, 1.0, C_g, 50.0, 0.0}, opt);
    return lock_to_idt(m, w0_rel * m.omega_idt());
}

// Independent references: term-by-term sums in long double.
inline std::complex<long double> brute_A(int n, long double theta) {
    std::complex<long double> s = 0;
    for (int k = 0; k < n; ++k) s += std::polar(1.0L, -theta * k);
    return s;
}

inline std::complex<long double> brute_H(int n, long double theta) {
    std::complex<long double> s = static_cast<long double>(n);
    for (int j = 1; j < n; ++j) s += static_cast<long double>(2 * (n - j)) * std::polar(1.0L, -theta * j);
    return s;
}

// Periodic discrete Hilbert transform (cos -> sin) of one full period.
inline Eigen::ArrayXd hilbert(const Eigen::ArrayXd& x) {
    const Eigen::Index n = x.size();
    Eigen::FFT<double> fft;
    Eigen::VectorXcd f;
    Eigen::VectorXd xv = x.matrix();
    fft.fwd(f, xv);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double s = (k == 0 || 2 * k == n) ? 0.0 : (2 * k < n ? 1.0 : -1.0);
        f[k] *= std::complex<double>(0.0, -s);
    }
    Eigen::VectorXcd y;
    fft.inv(y, f);
    return y.real().array();
}

// Analytic-signal envelope; zero-padded to a power of two (kissfft is slow on large primes).
inline Eigen::ArrayXd envelope(const Eigen::ArrayXd& x) {
    Eigen::Index n = 1;
    while (n < x.size()) n <<= 1;
    Eigen::FFT<double> fft;
    Eigen::VectorXcd f;
    Eigen::VectorXd xv = Eigen::VectorXd::Zero(n);
    xv.head(x.size()) = x.matrix();
    fft.fwd(f, xv);
    for (Eigen::Index k = 1; k < n; ++k) f[k] *= (2 * k < n) ? 2.0 : (2 * k == n ? 1.0 : 0.0);
    Eigen::VectorXcd y;
    fft.inv(y, f);
    return y.head(x.size()).array().abs();
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace cqad::test
