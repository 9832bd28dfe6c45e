#include "cqad/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad {

Drive Drive::impulse(Port p) {
    Drive d;
    d.kind = DriveKind::impulse;
    d.port = p;
    return d;
}

Drive Drive::gaussian_pulse(double center_omega, double bandwidth, Port p) {
    Drive d;
    d.kind = DriveKind::gaussian_pulse;
    d.port = p;
    d.center_omega = center_omega;
    d.bandwidth = bandwidth;
    return d;
}

Drive Drive::cw(double omega, Port p) {
    Drive d;
    d.kind = DriveKind::cw;
    d.port = p;
    d.center_omega = omega;
    return d;
}

double drive_waveform(const Drive& d, double t) {
    switch (d.kind) {
        case DriveKind::none: return 0.0;
        case DriveKind::impulse: {
            const double x = (t - d.t0) * d.bandwidth;
            return d.amplitude * std::exp(-0.5 * x * x);
        }
        case DriveKind::gaussian_pulse: {
            const double x = (t - d.t0) * d.bandwidth;
            return d.amplitude * std::exp(-0.5 * x * x) * std::cos(d.center_omega * (t - d.t0));
        }
        case DriveKind::cw: {
            if (t < 0.0) return 0.0;
            double env = 1.0;
            if (t < d.ramp) {
                const double s = std::sin(0.5 * pi * t / d.ramp);
                env = s * s;
            }
            return d.amplitude * env * std::sin(d.center_omega * t);
        }
    }
    return 0.0;
}

namespace {

// Gauss-Legendre rule on [0, 1] from the Jacobi matrix eigenproblem.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    nodes = (es.eigenvalues().array() + 1.0) / 2.0;
    weights = es.eigenvectors().row(0).transpose().array().square();  // sums to 1 on [0, 1]
}

Drive resolve(Drive d, const SystemModel& m, double dt) {
    const double w = m.omega_idt();
    switch (d.kind) {
        case DriveKind::impulse:
            if (d.bandwidth <= 0.0) d.bandwidth = 1.0 / (2.0 * dt);
            if (d.t0 <= 0.0) d.t0 = 6.0 / d.bandwidth;
            break;
        case DriveKind::gaussian_pulse:
            if (d.center_omega <= 0.0) d.center_omega = w;
            if (d.bandwidth <= 0.0) d.bandwidth = 0.2 * w;
            if (d.t0 <= 0.0) d.t0 = 8.0 / d.bandwidth;
            break;
        case DriveKind::cw:
            if (!(d.center_omega > 0.0)) throw DomainError("cw drive needs a positive frequency");
            if (d.ramp <= 0.0) d.ramp = 20.0 * two_pi / d.center_omega;
            break;
        case DriveKind::none: break;
    }
    if (d.delay_steps < 0) throw DomainError("drive delay must be non-negative");
    return d;
}

// Circular p_J history addressed by absolute step index; negative steps read 0.
class History {
public:
    explicit History(std::size_t depth) : buf_(depth, 0.0) {}
    void put(long k, double v) { buf_[static_cast<std::size_t>(k) % buf_.size()] = v; }
    double get(long k) const { return k < 0 ? 0.0 : buf_[static_cast<std::size_t>(k) % buf_.size()]; }

private:
    std::vector<double> buf_;
};

}  // namespace

DelaySystem build_delay_system(const SystemModel& model, double dt_target, const Drive& drive,
                               const DelayOptions& opt) {
    const double tau = model.tau();
    if (!(dt_target > 0.0)) throw DomainError("dt_target must be positive");
    if (dt_target >= tau) throw DomainError("dt_target >= tau leaves the delay unresolved");
    if (model.options().per_frequency_z0)
        throw DomainError("time-domain model needs a frequency-independent Z0");
    if (opt.gate_port && !model.gate_enabled()) throw GateDisabledError("gate port requested with C_g = 0");
    if (drive.port == Port::gate && drive.kind != DriveKind::none && !opt.gate_port)
        throw DomainError("gate drive needs the gate port");

    const int m = static_cast<int>(std::ceil(tau / dt_target * (1.0 - 1e-12)));
    if (m < 4) throw DomainError("need at least 4 steps per tau");
    const double dt = tau / m;
    const int n = model.n();
    const double cs = model.C_sigma(), L = model.L();

    const double ka = model.Z0() * model.C_c() * model.C_c() / (2.0 * cs * cs);
    const double kg = opt.gate_port ? model.atom().Z_el * model.atom().C_g * model.atom().C_g / (cs * cs) : 0.0;

    Eigen::Matrix2d M;
    M << -(ka * n + kg) / L, -1.0 / L, 1.0 / cs, 0.0;
    const Eigen::Vector2d b(1.0, 0.0);

    Eigen::Matrix2d E;
    Eigen::Matrix<double, 2, 6> G = Eigen::Matrix<double, 2, 6>::Zero();
    if (opt.rule == StepRule::exponential) {
        E = (M * dt).exp();
        Eigen::VectorXd xs, ws;
        gauss_legendre(24, xs, ws);
        for (int q = 0; q < xs.size(); ++q) {
            const Eigen::Vector2d phi = (M * (dt * (1.0 - xs[q]))).exp() * b * (dt * ws[q]);
            for (int i = 0; i < 6; ++i) {
                double l = 1.0;
                for (int o = 0; o < 6; ++o)
                    if (o != i) l *= (xs[q] - (o - 2)) / static_cast<double>(i - o);
                G.col(i) += l * phi;
            }
        }
    } else {
        const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
        const Eigen::Matrix2d lhs_inv = (I - 0.5 * dt * M).inverse();
        E = lhs_inv * (I + 0.5 * dt * M);
        G.col(2) = G.col(3) = lhs_inv * b * (0.5 * dt);
    }

    return DelaySystem{model,
                       dt,
                       m,
                       static_cast<std::size_t>((n - 1) * m + 8),
                       resolve(drive, model, dt),
                       opt.rule,
                       opt.gate_port,
                       array_factor_stencil(n),
                       h_factor_stencil(n),
                       ka,
                       kg,
                       E,
                       G};
}

TimeTrace integrate(const DelaySystem& sys, double duration) {
    const SystemModel& mdl = sys.model;
    const int n = mdl.n();
    const long m = sys.steps_per_tau;
    if (!(duration > (n - 1) * mdl.tau())) throw DomainError("duration must exceed the longest delay");
    const long N = static_cast<long>(std::ceil(duration / sys.dt));
    const double cs = mdl.C_sigma(), L = mdl.L();

    // Drive samples on the driven port, zero before the (shifted) start.
    Eigen::ArrayXd a(N + 4);
    for (long i = 0; i < N + 4; ++i) {
        const long s = i - sys.drive.delay_steps;
        a[i] = s < 0 ? 0.0 : drive_waveform(sys.drive, static_cast<double>(s) * sys.dt);
    }
    const bool acoustic = sys.drive.port != Port::gate;
    auto in_ac = [&](long i) { return acoustic && i >= 0 ? a[i] : 0.0; };
    auto in_g = [&](long i) { return !acoustic && i >= 0 ? a[i] : 0.0; };

    const double c_s = mdl.C_c() / cs, c_g = 2.0 * mdl.atom().C_g / cs;
    const double c_out = mdl.Z0() * mdl.C_c() / (2.0 * cs);
    const double c_gout = sys.gate_port ? mdl.atom().Z_el * mdl.atom().C_g / cs : 0.0;

    History hist(sys.history_depth);
    auto forcing = [&](long i) {
        if (i < 0) return 0.0;
        double d = 0.0, s = 0.0;
        for (int j = 1; j < n; ++j) d += sys.h_stencil[static_cast<std::size_t>(j)] * hist.get(i - j * m);
        for (int j = 0; j < n; ++j) s += sys.a_stencil[static_cast<std::size_t>(j)] * in_ac(i - j * m);
        return -(sys.kappa_a * d + c_s * s + c_g * in_g(i)) / L;
    };

    TimeTrace tr;
    tr.t = Eigen::ArrayXd::LinSpaced(N + 1, 0.0, static_cast<double>(N)) * sys.dt;
    tr.pJ = Eigen::ArrayXd::Zero(N + 1);
    for (auto* v : {&tr.phi_out_left, &tr.phi_out_right, &tr.phi_out_gate, &tr.phi_in_left, &tr.phi_in_right,
                    &tr.phi_in_gate})
        *v = Eigen::ArrayXd::Zero(N + 1);
    Eigen::ArrayXd* in_port = sys.drive.port == Port::left    ? &tr.phi_in_left
                              : sys.drive.port == Port::right ? &tr.phi_in_right
                                                              : &tr.phi_in_gate;
    *in_port = a.head(N + 1);

    const double scale = std::max(a.abs().maxCoeff(), 1e-300);
    const long delay = (n - 1) * m;
    auto emit = [&](long k) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += sys.a_stencil[static_cast<std::size_t>(j)] * hist.get(k - j * m);
        const double from_right = k >= delay ? tr.phi_in_right[k - delay] : 0.0;
        const double from_left = k >= delay ? tr.phi_in_left[k - delay] : 0.0;
        tr.phi_out_left[k] = from_right + c_out * sum;
        tr.phi_out_right[k] = from_left + c_out * sum;
        tr.phi_out_gate[k] = sys.gate_port ? tr.phi_in_gate[k] + c_gout * tr.pJ[k] : 0.0;
        const double big = std::max({std::abs(tr.phi_out_left[k]), std::abs(tr.phi_out_right[k]),
                                     std::abs(tr.phi_out_gate[k])});
        if (!std::isfinite(tr.pJ[k]) || !(big <= 1e12 * scale))
            throw InstabilityError("time integration blew up at step " + std::to_string(k),
                                   static_cast<std::size_t>(k));
    };

    Eigen::Vector2d y = Eigen::Vector2d::Zero();  // (p_J, u)
    Eigen::Matrix<double, 6, 1> w;
    hist.put(0, 0.0);
    for (int i = 0; i < 6; ++i) w[i] = forcing(i - 2);
    emit(0);
    for (long k = 0; k < N; ++k) {
        y = sys.propagator * y + sys.weights * w;
        hist.put(k + 1, y[0]);
        tr.pJ[k + 1] = y[0];
        emit(k + 1);
        for (int i = 0; i < 5; ++i) w[i] = w[i + 1];
        w[5] = forcing(k + 4);
    }
    return tr;
}

namespace {

double tail_ratio(const TimeTrace& tr, Eigen::Index tail) {
    const Eigen::ArrayXd out = tr.phi_out_left.abs() + tr.phi_out_right.abs() + tr.phi_out_gate.abs();
    const double peak = out.maxCoeff();
    return peak > 0.0 ? out.tail(tail).maxCoeff() / peak : 0.0;
}

}  // namespace

TimeTrace integrate_to_ringdown(const DelaySystem& sys, double rel_tol, double max_duration) {
    const SystemModel& m = sys.model;
    const Drive& d = sys.drive;
    if (d.kind == DriveKind::cw) throw DomainError("cw drive never rings down");
    const double span = m.n() * m.tau();
    if (max_duration <= 0.0) max_duration = 1e5 * m.tau();
    double T = static_cast<double>(d.delay_steps) * sys.dt + 50.0 * span;
    if (d.kind != DriveKind::none) T += d.t0 + 10.0 / d.bandwidth;
    for (;;) {
        TimeTrace tr = integrate(sys, T);
        const auto tail = std::max<Eigen::Index>(tr.size() / 10, static_cast<Eigen::Index>(2 * span / sys.dt));
        if (tail_ratio(tr, std::min(tail, tr.size())) <= rel_tol) return tr;
        if (T >= max_duration) throw Error("no ringdown to " + std::to_string(rel_tol) + " within the duration cap");
        T = std::min(2.0 * T, max_duration);
    }
}

Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

Eigen::VectorXcd spectrum(const Eigen::ArrayXd& x, Eigen::Index nfft) {
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(nfft);
    padded.head(x.size()) = x.matrix();
    Eigen::FFT<double> fft;
    Eigen::VectorXcd out;
    fft.fwd(out, padded);
    return out;
}

double bin_omega(Eigen::Index k, Eigen::Index nfft, double dt) {
    const Eigen::Index s = k <= nfft / 2 ? k : k - nfft;
    return two_pi * static_cast<double>(s) / (static_cast<double>(nfft) * dt);
}

}  // namespace

TimeDomainScattering scattering_from_trace(const DelaySystem& sys, const TimeTrace& trace, double omega_lo,
                                           double omega_hi) {
    if (!(omega_hi > omega_lo && omega_lo > 0.0)) throw DomainError("band must satisfy 0 < lo < hi");
    const Eigen::Index nfft = next_pow2(trace.size());
    const double dt = sys.dt, tau = sys.model.tau();
    const int n = sys.model.n();

    const Port port = sys.drive.port;
    const Eigen::ArrayXd& in = port == Port::left ? trace.phi_in_left
                               : port == Port::right ? trace.phi_in_right
                                                     : trace.phi_in_gate;
    const Eigen::ArrayXd& first = port == Port::left ? trace.phi_out_left
                                  : port == Port::right ? trace.phi_out_right
                                                        : trace.phi_out_gate;
    const Eigen::ArrayXd& second = port == Port::right ? trace.phi_out_left : trace.phi_out_right;
    const Eigen::VectorXcd fa = spectrum(in, nfft), f1 = spectrum(first, nfft),
                           f2 = spectrum(port == Port::gate ? trace.phi_out_left : second, nfft);

    std::vector<Eigen::Index> bins;
    double peak = 0.0;
    for (Eigen::Index k = 0; k <= nfft / 2; ++k) {
        peak = std::max(peak, std::abs(fa[k]));
        const double w = bin_omega(k, nfft, dt);
        if (w >= omega_lo && w <= omega_hi) bins.push_back(k);
    }
    if (bins.empty()) throw CoverageError("band contains no FFT bin", -INFINITY);
    double weakest = INFINITY;
    for (auto k : bins) weakest = std::min(weakest, std::abs(fa[k]));
    const double margin = peak > 0.0 ? 20.0 * std::log10(weakest / peak) : -INFINITY;
    if (!(margin >= -20.0)) {
        std::ostringstream os;
        os << "drive covers the band only down to " << margin << " dB (need -20 dB)";
        throw CoverageError(os.str(), margin);
    }

    const auto nb = static_cast<Eigen::Index>(bins.size());
    const bool gate = port == Port::gate;
    TimeDomainScattering out{{gate ? Observable::r_g : Observable::r_ac, Eigen::ArrayXd(nb), Eigen::ArrayXcd(nb)},
                             {gate ? Observable::t_ac_g : Observable::t_ac, Eigen::ArrayXd(nb), Eigen::ArrayXcd(nb)},
                             margin,
                             trace};
    const cplx i(0.0, 1.0);
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index k = bins[static_cast<std::size_t>(b)];
        const double w = bin_omega(k, nfft, dt);
        out.reflection.grid[b] = out.transmission.grid[b] = w;
        cplx r = f1[k] / fa[k], t = f2[k] / fa[k];
        if (!gate) {
            r *= std::exp(i * (w * tau * (n - 1)));
            t *= std::exp(-i * (w * tau));
        }
        out.reflection.values[b] = r;
        out.transmission.values[b] = t;
    }
    return out;
}

TimeDomainScattering scattering_from_time_domain(const DelaySystem& sys, double omega_lo, double omega_hi) {
    return scattering_from_trace(sys, integrate_to_ringdown(sys), omega_lo, omega_hi);
}

namespace {

double port_energy(const Eigen::ArrayXd& x, Eigen::Index nfft, double dt, double Z) {
    if (x.isZero(0.0)) return 0.0;
    const Eigen::VectorXcd f = spectrum(x, nfft);
    double e = 0.0;
    for (Eigen::Index k = 0; k < nfft; ++k) {
        const double w = bin_omega(k, nfft, dt);
        e += w * w * std::norm(f[k]);
    }
    return e / Z;
}

// With K2 = 0 the line impedance vanishes; the acoustic ports are then decoupled from
// the gate, so any common weight leaves the ratio unchanged.
double acoustic_impedance(const SystemModel& m) { return m.Z0() > 0.0 ? m.Z0() : 1.0; }

}  // namespace


std::string EnergyReport::describe() const {
    std::ostringstream os;
    os.precision(10);
    os << "in=" << in << " out_left=" << out_left << " out_right=" << out_right << " out_gate=" << out_gate
       << " ratio=" << ratio;
    return os.str();
}

EnergyReport energy_audit(const TimeTrace& trace, const DelaySystem& sys, double tol) {
    const Eigen::Index nfft = next_pow2(trace.size());
    const double z0 = acoustic_impedance(sys.model), zel = sys.model.atom().Z_el, dt = sys.dt;
    EnergyReport r;
    r.in = port_energy(trace.phi_in_left, nfft, dt, z0) + port_energy(trace.phi_in_right, nfft, dt, z0) +
           port_energy(trace.phi_in_gate, nfft, dt, zel);
    r.out_left = port_energy(trace.phi_out_left, nfft, dt, z0);
    r.out_right = port_energy(trace.phi_out_right, nfft, dt, z0);
    r.out_gate = port_energy(trace.phi_out_gate, nfft, dt, zel);
    r.ratio = r.in > 0.0 ? (r.out_left + r.out_right + r.out_gate) / r.in : 0.0;
    r.conserved = r.in > 0.0 && std::abs(r.ratio - 1.0) <= tol;
    return r;
}

void require_conserved(const EnergyReport& report) {
    if (!report.conserved) throw ConservationError("energy not conserved: " + report.describe());
}

namespace {

Eigen::ArrayXd derivative(const Eigen::ArrayXd& x, double dt) {
    const Eigen::Index n = x.size();
    Eigen::ArrayXd d = Eigen::ArrayXd::Zero(n);
    for (Eigen::Index k = 2; k + 2 < n; ++k)
        d[k] = (x[k - 2] - 8.0 * x[k - 1] + 8.0 * x[k + 1] - x[k + 2]) / (12.0 * dt);
    if (n >= 2) {
        d[0] = (x[1] - x[0]) / dt;
        d[n - 1] = (x[n - 1] - x[n - 2]) / dt;
    }
    if (n >= 4) {
        d[1] = (x[2] - x[0]) / (2.0 * dt);
        d[n - 2] = (x[n - 1] - x[n - 3]) / (2.0 * dt);
    }
    return d;
}

void accumulate(Eigen::ArrayXd& acc, const Eigen::ArrayXd& x, double dt, double Z) {
    const Eigen::ArrayXd p = derivative(x, dt).square() / Z;
    double s = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        s += p[k] * dt;
        acc[k] += s;
    }
}

}  // namespace

EnergyHistory cumulative_energy(const TimeTrace& trace, const DelaySystem& sys) {
    const double z0 = acoustic_impedance(sys.model), zel = sys.model.atom().Z_el;
    EnergyHistory h{Eigen::ArrayXd::Zero(trace.size()), Eigen::ArrayXd::Zero(trace.size())};
    accumulate(h.in, trace.phi_in_left, sys.dt, z0);
    accumulate(h.in, trace.phi_in_right, sys.dt, z0);
    accumulate(h.in, trace.phi_in_gate, sys.dt, zel);
    accumulate(h.out, trace.phi_out_left, sys.dt, z0);
    accumulate(h.out, trace.phi_out_right, sys.dt, z0);
    accumulate(h.out, trace.phi_out_gate, sys.dt, zel);
    return h;
}

}  // namespace cqad
