#include "cqad/idt.hpp"

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad {

void validate(const IdtGeometry& geom) {
    if (geom.n < 1) throw DomainError("IDT needs n >= 1 coupling points");
    if (!(geom.pitch > 0.0)) throw DomainError("IDT pitch must be positive");
    if (!(geom.W > 0.0)) throw DomainError("IDT overlap W must be positive");
}

double idt_delay(const IdtGeometry& geom, const MaterialParams& mat) { return geom.pitch / mat.v_s; }

std::complex<double> h_factor_sinc_approx(int n, double omega, double omega_idt) {
    const double nn = static_cast<double>(n) * n;
    const double x = n * pi * (omega - omega_idt) / omega_idt;
    if (std::abs(x) < 1e-4) {
        // Series keeps Im accurate where sin(2X) - 2X cancels.
        const double x2 = x * x;
        return {nn * (1.0 - x2 / 3.0), nn * (-2.0 * x / 3.0) * (1.0 - x2 / 5.0)};
    }
    const double s = std::sin(x) / x;
    return {nn * s * s, nn * (std::sin(2.0 * x) - 2.0 * x) / (2.0 * x * x)};
}

SpectralFactors spectral_factors(int n, double omega, double tau) {
    return {array_factor(n, omega, tau), h_factor(n, omega, tau), omega};
}

Eigen::ArrayXcd array_factor(int n, const Eigen::ArrayXd& omega, double tau) {
    return omega.unaryExpr([&](double w) { return array_factor(n, w, tau); });
}

Eigen::ArrayXcd h_factor(int n, const Eigen::ArrayXd& omega, double tau) {
    return omega.unaryExpr([&](double w) { return h_factor(n, w, tau); });
}

std::vector<int> array_factor_stencil(int n) { return std::vector<int>(static_cast<std::size_t>(n), 1); }

std::vector<int> h_factor_stencil(int n) {
    std::vector<int> c(static_cast<std::size_t>(n));
    c[0] = n;
    for (int j = 1; j < n; ++j) c[static_cast<std::size_t>(j)] = 2 * (n - j);
    return c;
}

}  // namespace cqad
