#include <doctest.h>

#include "cqad/errors.hpp"
#include "cqad/response.hpp"
#include "cqad/spectral.hpp"
#include "support.hpp"

using namespace cqad;

namespace {

MaterialParams decoupled() { return {"none", 0.0, 3000.0, 5e-11}; }

double pout_over_pin(const Eigen::Matrix3cd& s, int port) { return s.col(port).squaredNorm(); }

}  // namespace

TEST_CASE("damping at the IDT frequency") {
    const auto ga = test::desk_model(test::gaas(), 10);
    const auto ln = test::desk_model(test::linbo3(), 10);
    const double w = ga.omega_idt();
    CHECK(damping(ga, w).real() / w == doctest::Approx(0.0032792004996876952).epsilon(1e-10));
    CHECK(damping(ln, w).real() / w == doctest::Approx(0.22485946283572767).epsilon(1e-10));
    CHECK(std::abs(damping(ln, w).imag()) < 1e-9 * damping(ln, w).real());

    for (const auto& mat : {test::gaas(), test::linbo3()}) {
        for (int n : {1, 3, 10, 82}) {
            const auto m = test::desk_model(mat, n, true);
            CHECK(damping(m, m.omega_0()).real() / m.omega_0() ==
                  doctest::Approx(normalized_decay(mat.K2, n)).epsilon(1e-12));
        }
    }
    CHECK(normalized_decay(0.0007, 10) == doctest::Approx(0.0035));
    CHECK(normalized_decay(0.048, 10) == doctest::Approx(0.24));
}

TEST_CASE("damping derivative matches a central difference") {
    const auto m = test::desk_model(test::linbo3(), 10);
    for (double x : {0.93, 1.0, 1.07}) {
        const cplx w(x * m.omega_idt(), -0.01 * m.omega_idt());
        const double h = 1e-6 * m.omega_idt();
        const cplx fd = (denominator(m, w + h) - denominator(m, w - h)) / (2 * h);
        CHECK(std::abs(denominator_derivative(m, w) - fd) < 1e-6 * std::abs(fd));
    }
}

TEST_CASE("charge response") {
    SUBCASE("GaAs n=10 single peak at omega_0") {
        const auto m = test::desk_model(test::gaas(), 10);
        const auto s = sample(m, Observable::chi, relative_grid(m, 0.98, 1.02, 40001));
        const auto peaks = find_peaks(s.grid, s.abs2());
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].omega / m.omega_idt() == doctest::Approx(0.999997113745105).epsilon(1e-8));
        CHECK(peaks[0].fwhm / m.omega_idt() == doctest::Approx(0.00339773253623).epsilon(1e-4));
        CHECK(peaks[0].fwhm / m.omega_idt() == doctest::Approx(3.5e-3).epsilon(0.05));

        const auto ma = test::desk_model(test::gaas(), 10, true);
        const auto sa = sample(ma, Observable::chi, relative_grid(ma, 0.98, 1.02, 40001));
        const auto pa = find_peaks(sa.grid, sa.abs2());
        REQUIRE(pa.size() == 1);
        CHECK(pa[0].omega / ma.omega_idt() == doctest::Approx(0.999996695439624).epsilon(1e-8));
        CHECK(pa[0].fwhm / ma.omega_idt() == doctest::Approx(0.00363560551117).epsilon(1e-4));
    }
    SUBCASE("LiNbO3 n=10 two peaks") {
        const auto m = test::desk_model(test::linbo3(), 10);
        const auto s = sample(m, Observable::chi, relative_grid(m, 0.8, 1.2, 40001));
        const auto peaks = find_peaks(s.grid, s.abs2());
        REQUIRE(peaks.size() == 2);
        CHECK(peaks[0].omega / m.omega_idt() == doctest::Approx(0.930533549675455).epsilon(1e-7));
        CHECK(peaks[1].omega / m.omega_idt() == doctest::Approx(1.07124526676106).epsilon(1e-7));
        CHECK(peaks[0].fwhm / m.omega_idt() == doctest::Approx(0.015714).epsilon(1e-3));
        CHECK(peaks[1].fwhm / m.omega_idt() == doctest::Approx(0.014471).epsilon(1e-3));
        // symmetric about omega_0 to a fraction of the splitting
        const double mid = 0.5 * (peaks[0].omega + peaks[1].omega);
        CHECK(std::abs(mid / m.omega_0() - 1.0) < 0.01);
    }
    SUBCASE("decoupled line peaks at omega_0") {
        auto m = test::desk_model(test::gaas(), 10).with_material({"weak", 1e-9, 3000.0, 5e-11});
        m = lock_to_idt(m);
        const auto s = sample(m, Observable::chi, relative_grid(m, 0.999, 1.001, 20001));
        const auto peaks = find_peaks(s.grid, s.abs2());
        REQUIRE(peaks.size() == 1);
        CHECK(std::abs(peaks[0].omega / m.omega_0() - 1.0) < 1e-8);
    }
}

TEST_CASE("acoustic reflection and transmission") {
    const auto m = test::desk_model(test::gaas(), 10);
    const double w0 = m.omega_idt();
    CHECK(std::abs(acoustic_reflection(m, w0) + 1.0) < 1e-9);
    CHECK(std::abs(acoustic_transmission(m, w0)) < 1e-9);
    CHECK(std::abs(acoustic_reflection(m, 0.5 * w0)) < 1e-6);
    CHECK(std::abs(acoustic_reflection(m, 1.5 * w0)) < 1e-6);

    const auto k0 = lock_to_idt(m.with_material(decoupled()));
    for (double x : {0.7, 1.0, 1.3}) {
        const double w = x * w0;
        CHECK(acoustic_reflection(k0, w) == cplx(0.0));
        CHECK(std::abs(acoustic_transmission(k0, w) - std::exp(cplx(0, -w * k0.tau() * 10))) < 1e-12);
    }

    SUBCASE("LiNbO3 broad middle peak in |r|^2") {
        const auto ln = test::desk_model(test::linbo3(), 10);
        const auto s = sample(ln, Observable::r_ac, relative_grid(ln, 0.85, 1.15, 30001));
        std::vector<Peak> peaks;
        for (const auto& p : find_peaks(s.grid, s.abs2()))
            if (p.height > 0.5) peaks.push_back(p);
        // unit reflection at the three real roots of Re D; the outer two are the atomic peaks
        REQUIRE(peaks.size() == 3);
        CHECK(peaks[0].omega / ln.omega_idt() == doctest::Approx(0.936095992721274).epsilon(1e-7));
        CHECK(peaks[1].omega / ln.omega_idt() == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(peaks[2].omega / ln.omega_idt() == doctest::Approx(1.06641203233553).epsilon(1e-7));
        for (const auto& p : peaks) CHECK(p.height == doctest::Approx(1.0).epsilon(1e-8));
        // the middle one is the broad one: curvature of |r|^2 is smallest there
        auto curvature = [&](double w) {
            const double h = 1e-4 * ln.omega_idt();
            return std::abs(std::norm(acoustic_reflection(ln, w + h)) + std::norm(acoustic_reflection(ln, w - h)) -
                            2 * std::norm(acoustic_reflection(ln, w)));
        };
        CHECK(curvature(peaks[1].omega) < curvature(peaks[0].omega));
        CHECK(curvature(peaks[1].omega) < curvature(peaks[2].omega));
    }
}

TEST_CASE("two-port unitarity") {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto& mat = i % 2 ? test::linbo3() : test::gaas();
        const int n = test::uniform_int(1, 120);
        const auto m = test::desk_model(mat, n, i % 3 == 0, test::uniform(0.9, 1.1), 0.0);
        const double w = test::uniform(0.5, 1.5) * m.omega_idt();
        worst = std::max(worst, std::abs(std::norm(acoustic_reflection(m, w)) +
                                         std::norm(acoustic_transmission(m, w)) - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("gate reflection") {
    const auto m = test::desk_model(test::gaas(), 10);
    const double w0 = m.omega_idt();
    const double gg = gate_damping(m);
    const double g = damping(m, w0).real();
    CHECK(std::abs(gate_reflection(m, w0) - cplx(1.0 - 2.0 * gg / (g + gg))) < 1e-12);

    SUBCASE("decoupled atom reflects fully with a sign flip") {
        const auto k0 = lock_to_idt(m.with_material(decoupled()));
        CHECK(std::abs(gate_reflection(k0, w0) + 1.0) < 1e-12);
        CHECK(transduction(k0, w0) == cplx(0.0));
    }
    SUBCASE("impedance match") {
        auto atom = m.atom();
        atom.Z_el = g * m.L() * m.C_sigma() * m.C_sigma() / (atom.C_g * atom.C_g);
        const auto mm = m.with_atom(atom);
        CHECK(gate_damping(mm) == doctest::Approx(g).epsilon(1e-12));
        CHECK(std::abs(gate_reflection(mm, w0)) < 1e-9);
    }
    SUBCASE("absorption identity") {
        const auto ln = test::desk_model(test::linbo3(), 10);
        for (double x : {0.9, 0.93, 1.0, 1.07, 1.1}) {
            const double w = x * ln.omega_idt();
            const double direct = 1.0 - std::norm(gate_reflection(ln, w));
            CHECK(gate_absorption(ln, w) == doctest::Approx(direct).epsilon(1e-6));
        }
    }
    SUBCASE("disabled gate") {
        const auto ng = test::desk_model(test::gaas(), 10, false, 1.0, 0.0);
        CHECK_FALSE(ng.gate_enabled());
        CHECK(gate_damping(ng) == 0.0);
        CHECK_THROWS_AS(gate_reflection(ng, w0), GateDisabledError);
        CHECK_THROWS_AS(transduction(ng, w0), GateDisabledError);
    }
}

TEST_CASE("gate damping value") {
    const auto ln = test::desk_model(test::linbo3(), 10);
    CHECK(gate_damping(ln) / ln.omega_0() == doctest::Approx(5.886806971e-9).epsilon(1e-8));
}

TEST_CASE("transduction peaks between the dressed resonances") {
    const auto m = test::desk_model(test::linbo3(), 10);
    const auto s = sample(m, Observable::t_ac_g, relative_grid(m, 0.85, 1.15, 30001));
    const auto peaks = find_peaks(s.grid, s.abs2());
    REQUIRE_FALSE(peaks.empty());
    Eigen::Index imax;
    s.abs2().maxCoeff(&imax);
    const double x = s.grid[imax] / m.omega_idt();
    CHECK(x > 0.930533549675455);
    CHECK(x < 1.07124526676106);
}

TEST_CASE("three-port power conservation") {
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const auto& mat = i % 2 ? test::linbo3() : test::gaas();
        const int n = test::uniform_int(1, 100);
        auto m = test::desk_model(mat, n, false, test::uniform(0.9, 1.1), test::uniform(1e-18, 2e-16));
        auto atom = m.atom();
        atom.Z_el = test::uniform(10.0, 1e5);
        m = m.with_atom(atom);
        const double w = test::uniform(0.6, 1.4) * m.omega_idt();
        const Eigen::Matrix3cd s = scattering_matrix(m, w);
        const double u = (s.adjoint() * s - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff();
        worst = std::max(worst, u);
    }
    CHECK(worst < 1e-10);

    const auto m = test::desk_model(test::linbo3(), 10);
    const double w = 1.02 * m.omega_idt();
    const Eigen::Matrix3cd s = scattering_matrix(m, w);
    for (int p = 0; p < 3; ++p) CHECK(pout_over_pin(s, p) == doctest::Approx(1.0).epsilon(1e-10));
    // flux-normalized entries are the scalar observables
    const Eigen::Matrix3cd f = scattering_matrix(m, w, Normalization::flux);
    CHECK(std::abs(f(2, 2) - gate_reflection(m, w)) < 1e-14);
    CHECK(std::abs(f(0, 2) - transduction(m, w)) < 1e-12 * std::abs(transduction(m, w)));
}

TEST_CASE("reflection referred to the outer coupling point") {
    const auto m = test::desk_model(test::gaas(), 10, false, 1.0, 0.0);
    for (double x : {0.99, 1.0, 1.004}) {
        const double w = x * m.omega_idt();
        const Eigen::Matrix3cd s = scattering_matrix(m, w, Normalization::flux);
        const cplx shift = std::exp(cplx(0, -w * m.tau() * (m.n() - 1)));
        CHECK(std::abs(s(0, 0) - acoustic_reflection(m, w) * shift) < 1e-12);
        CHECK(std::abs(s(1, 0) - acoustic_transmission(m, w) * std::exp(cplx(0, w * m.tau()))) < 1e-12);
    }
}

TEST_CASE("reciprocity") {
    for (int i = 0; i < 50; ++i) {
        auto m = test::desk_model(test::linbo3(), test::uniform_int(1, 40));
        const double w = test::uniform(0.8, 1.2) * m.omega_idt();
        const Eigen::Matrix3cd s = scattering_matrix(m, w);
        CHECK(std::abs(std::abs(s(0, 0)) - std::abs(s(1, 1))) < 1e-14);
        CHECK(std::abs(s(1, 0) - s(0, 1)) < 1e-14);
        CHECK(std::abs(s(0, 2) - s(2, 0)) < 1e-12 * std::abs(s(0, 2)));
    }
}

TEST_CASE("admittance mapping") {
    double worst = 0.0;
    for (const auto& mat : {test::gaas(), test::linbo3()}) {
        for (int n : {1, 10, 82}) {
            const auto m = test::desk_model(mat, n, false, 1.0, 0.0);
            const Eigen::ArrayXd grid = relative_grid(m, 0.5, 1.5, 5001);
            for (double w : grid) {
                const cplx direct = -m.omega_0() * m.omega_0() * charge_response(m, w);
                worst = std::max(worst, std::abs(admittance_response(m, w) - direct) / std::abs(direct));
            }
        }
    }
    CHECK(worst < 1e-10);

    const auto m = test::desk_model(test::gaas(), 10, false, 1.0, 0.0);
    const auto s = sample(m, Observable::admittance, relative_grid(m, 0.98, 1.02, 4001));
    Eigen::Index imax;
    s.values.abs().maxCoeff(&imax);
    CHECK(std::abs(s.grid[imax] / m.omega_0() - 1.0) < 2e-5);

    const auto k0 = lock_to_idt(m.with_material(decoupled()));
    const double w = 0.9 * k0.omega_0();
    const double w0 = k0.omega_0();
    CHECK(std::abs(admittance_response(k0, w) - cplx(w0 * w0 / (w0 * w0 - w * w))) < 1e-12 * w0 * w0 / (w0 * w0 - w * w));
}

TEST_CASE("observables and sampling") {
    for (auto o : {Observable::chi, Observable::gamma_n, Observable::r_ac, Observable::r_g, Observable::t_ac_g,
                   Observable::t_ac, Observable::admittance})
        CHECK(observable_from_string(to_string(o)) == o);
    CHECK_THROWS_AS(observable_from_string("nope"), DomainError);

    const auto m = test::desk_model(test::gaas(), 10);
    Eigen::ArrayXd bad(3);
    bad << 1.0, 3.0, 2.0;
    CHECK_THROWS_AS(sample(m, Observable::chi, bad), DomainError);
    bad << -1.0, 1.0, 2.0;
    CHECK_THROWS_AS(sample(m, Observable::chi, bad), DomainError);
    const auto s = sample(m, Observable::chi, relative_grid(m, 0.9, 1.1, 101));
    CHECK(s.normalized_abs2().maxCoeff() == doctest::Approx(1.0));
}
