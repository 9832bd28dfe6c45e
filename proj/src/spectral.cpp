#include "cqad/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad {

CriterionResult cavity_criterion(double K2, int n) {
    const double g = normalized_decay(K2, n);
    const double lhs = 0.5 * pi * K2 * n * n;
    return {lhs, lhs >= 1.0, g, pi * K2 * n * n};
}

std::optional<int> minimal_cavity_n(double K2) {
    if (!(K2 > 0.0)) return std::nullopt;
    int n = std::max(1, static_cast<int>(std::floor(std::sqrt(2.0 / (pi * K2)))) - 1);
    while (!cavity_criterion(K2, n).satisfied) ++n;
    return n;
}

std::vector<Peak> find_peaks(const Eigen::ArrayXd& grid, const Eigen::ArrayXd& y) {
    if (grid.size() != y.size()) throw DomainError("grid and samples differ in length");
    std::vector<Peak> out;
    const Eigen::Index n = y.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        const double den = y[i - 1] - 2.0 * y[i] + y[i + 1];
        const double d = den < 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / den : 0.0;
        const double h = d >= 0.0 ? grid[i + 1] - grid[i] : grid[i] - grid[i - 1];
        Peak p{grid[i] + d * h, y[i] - 0.25 * (y[i - 1] - y[i + 1]) * d, nan};

        const double half = 0.5 * p.height;
        Eigen::Index l = i, r = i;
        while (l > 0 && y[l] > half) --l;
        while (r + 1 < n && y[r] > half) ++r;
        if (y[l] <= half && y[r] <= half) {
            const double wl = grid[l] + (half - y[l]) / (y[l + 1] - y[l]) * (grid[l + 1] - grid[l]);
            const double wr = grid[r - 1] + (y[r - 1] - half) / (y[r - 1] - y[r]) * (grid[r] - grid[r - 1]);
            p.fwhm = wr - wl;
        }
        out.push_back(p);
    }
    return out;
}

double splitting(const SystemModel& model, Eigen::Index points) {
    const double n = model.n();
    const double lo = std::max(0.05 * model.omega_idt(), std::min(model.omega_0(), model.omega_idt()) * (1.0 - 3.0 / n));
    const double hi = std::max(model.omega_0(), model.omega_idt()) * (1.0 + 3.0 / n);
    const Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(points, lo, hi);
    auto peaks = find_peaks(grid, sample(model, Observable::chi, grid).abs2());
    if (peaks.size() < 2) throw NotSplitError("|chi|^2 has a single peak");
    std::partial_sort(peaks.begin(), peaks.begin() + 2, peaks.end(),
                      [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return std::abs(peaks[0].omega - peaks[1].omega);
}

std::string to_string(Regime r) { return r == Regime::split ? "split" : "single"; }

ComplexRegion default_pole_region(const SystemModel& model) {
    const double w = model.omega_idt(), w0 = model.omega_0(), n = model.n();
    ComplexRegion r;
    r.re_min = std::max(0.25 * w, std::min(w * (1.0 - 1.5 / n), w0 * (1.0 - 0.5 / n)));
    r.re_max = std::max(w * (1.0 + 1.5 / n), w0 * (1.0 + 0.5 / n));
    r.im_min = -std::min(0.6 / n, 0.95) * w;
    r.im_max = 0.05 / n * w;
    return r;
}

namespace {

// Search runs on zeros of the denominator itself (upper half plane); the
// reported poles are their conjugates.
struct Rect {
    double x0, x1, y0, y1;
    bool contains(cplx z, double tol) const {
        return z.real() >= x0 - tol && z.real() <= x1 + tol && z.imag() >= y0 - tol && z.imag() <= y1 + tol;
    }
};

Rect paper_rect(const ComplexRegion& r) { return {r.re_min, r.re_max, -r.im_max, -r.im_min}; }

void check_region(const SystemModel& model, const ComplexRegion& r) {
    const double w = model.omega_idt();
    if (!(r.re_min < w && w < r.re_max)) throw DomainError("pole region must contain omega_IDT on its real extent");
    if (!(r.im_max > r.im_min)) throw DomainError("pole region has no height");
    if (r.im_max - r.im_min > w) throw DomainError("pole region taller than omega_IDT");
}

double arg_increment(const SystemModel& m, cplx za, cplx da, cplx zb, cplx db, int depth) {
    const double d = std::arg(db / da);
    if (std::abs(d) < pi / 8.0 || depth > 40) return d;
    const cplx zm = 0.5 * (za + zb);
    const cplx dm = denominator(m, zm);
    return arg_increment(m, za, da, zm, dm, depth + 1) + arg_increment(m, zm, dm, zb, db, depth + 1);
}

std::optional<cplx> newton(const SystemModel& m, cplx z, int iters, const Rect& box) {
    const double w = m.omega_idt();
    const double margin = 0.1 * std::max(box.x1 - box.x0, box.y1 - box.y0);
    for (int k = 0; k < iters; ++k) {
        const cplx dz = denominator(m, z) / denominator_derivative(m, z);
        z -= dz;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !box.contains(z, margin)) return std::nullopt;
        if (std::abs(dz) < 1e-12 * w) return z;
    }
    return std::nullopt;
}

}  // namespace

int count_zeros(const SystemModel& model, const ComplexRegion& region) {
    const Rect b = paper_rect(region);
    const cplx corners[5] = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}, {b.x0, b.y0}};
    constexpr int segments = 256;
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cplx za = corners[e], da = denominator(model, za);
        for (int s = 1; s <= segments; ++s) {
            const cplx zb = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(s) / segments);
            const cplx db = denominator(model, zb);
            total += arg_increment(model, za, da, zb, db, 0);
            za = zb;
            da = db;
        }
    }
    return static_cast<int>(std::lround(total / two_pi));
}

PoleSet find_poles(const SystemModel& model, const ComplexRegion& region, const PoleSearchOptions& opt) {
    check_region(model, region);
    const double w = model.omega_idt();
    const Rect box = paper_rect(region);
    const int expected = count_zeros(model, region);

    std::vector<cplx> roots, candidates;
    int nx = opt.re_points, ny = opt.im_points;
    for (int pass = 0; pass <= opt.max_refinements; ++pass, nx *= 2, ny *= 2) {
        const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(nx, box.x0, box.x1);
        const Eigen::ArrayXd ys = Eigen::ArrayXd::LinSpaced(ny, box.y0, box.y1);
        Eigen::MatrixXd f(ny, nx);
        for (int j = 0; j < nx; ++j)
            for (int i = 0; i < ny; ++i) f(i, j) = std::log(std::abs(denominator(model, cplx(xs[j], ys[i]))));

        for (int i = 0; i < ny; ++i)
            for (int j = 0; j < nx; ++j) {
                bool is_min = true;
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        const int a = i + di, c = j + dj;
                        if ((di || dj) && a >= 0 && a < ny && c >= 0 && c < nx && !(f(i, j) < f(a, c))) {
                            is_min = false;
                            break;
                        }
                    }
                if (!is_min) continue;
                const cplx seed(xs[j], ys[i]);
                candidates.push_back(seed);
                auto z = newton(model, seed, opt.max_newton, box);
                if (!z || !box.contains(*z, 1e-12 * w)) continue;
                const bool dup = std::any_of(roots.begin(), roots.end(),
                                             [&](cplx r) { return std::abs(r - *z) < 1e-9 * w; });
                if (!dup) roots.push_back(*z);
            }
        if (static_cast<int>(roots.size()) == expected) break;
    }
    if (static_cast<int>(roots.size()) != expected) {
        std::vector<cplx> report = roots.empty() ? candidates : roots;
        for (auto& c : report) c = std::conj(c);
        throw PoleSearchError("pole search found " + std::to_string(roots.size()) + " zeros, argument principle counts " +
                                  std::to_string(expected),
                              std::move(report));
    }

    PoleSet ps;
    ps.search_region = region;
    ps.zero_count = expected;
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (cplx z : roots) {
        ps.poles.push_back(std::conj(z));
        ps.residual_norms.push_back(std::abs(denominator(model, z)));
    }

    ps.classification = Regime::single;
    if (ps.poles.size() >= 2) {
        std::vector<cplx> by_damping = ps.poles;
        std::sort(by_damping.begin(), by_damping.end(),
                  [](cplx a, cplx b) { return std::abs(a.imag()) < std::abs(b.imag()); });
        const cplx d = by_damping[0] - by_damping[1];
        if (std::abs(d.real()) > std::abs(d.imag())) ps.classification = Regime::split;
    }
    return ps;
}

PoleSet find_poles(const SystemModel& model) { return find_poles(model, default_pole_region(model)); }

std::vector<RealRoot> real_axis_resonances(const SystemModel& model) {
    const double w = model.omega_idt(), w0 = model.omega_0(), n = model.n();
    const double lo = std::max(1e-3 * w, std::min(w, w0) * (1.0 - 1.0 / n));
    const double hi = std::max(w, w0) * (1.0 + 1.0 / n);
    auto f = [&](double x) { return x * x - w0 * w0 + damping(model, x).imag() * x; };

    constexpr int scan = 4000;
    const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(scan + 1, lo, hi);
    Eigen::ArrayXd fs(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);

    double lobe_max = 0.0;
    for (const double x : Eigen::ArrayXd::LinSpaced(2001, w * (1.0 - 1.0 / n), w * (1.0 + 1.0 / n)))
        lobe_max = std::max(lobe_max, damping(model, std::max(x, 1e-3 * w)).real());

    std::vector<RealRoot> roots;
    for (Eigen::Index i = 0; i + 1 < xs.size(); ++i) {
        double a = xs[i], b = xs[i + 1], fa = fs[i], fb = fs[i + 1];
        double x;
        if (fa == 0.0) {
            x = a;
        } else if (fa * fb < 0.0) {
            while (b - a > 4.0 * std::numeric_limits<double>::epsilon() * b) {
                const double m = 0.5 * (a + b), fm = f(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fm < 0.0) == (fa < 0.0)) { a = m; fa = fm; } else { b = m; }
            }
            x = 0.5 * (a + b);
        } else {
            continue;
        }
        const cplx g = damping(model, x);
        const double slope = 2.0 * x + g.imag() + x * damping_derivative(model, x).imag();
        roots.push_back({x, slope, lobe_max > 0.0 ? g.real() / lobe_max : 0.0, slope <= 0.0});
    }
    return roots;
}

double gate_absorption(const SystemModel& model, double omega) {
    if (!model.gate_enabled()) throw GateDisabledError("gate disabled (C_g = 0)");
    const double gg = gate_damping(model);
    return 4.0 * gg * damping(model, omega).real() * omega * omega / std::norm(loaded_denominator(model, omega));
}

FluxMap flux_map(const SystemModel& model, const Eigen::ArrayXd& flux_grid, const Eigen::ArrayXd& freq_grid,
                 Observable observable) {
    if (observable != Observable::r_g && observable != Observable::r_ac)
        throw DomainError("flux map supports r_g and r_ac only");
    if (observable == Observable::r_g && !model.gate_enabled()) throw GateDisabledError("gate disabled (C_g = 0)");
    const Eigen::Index nf = flux_grid.size(), nw = freq_grid.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    FluxMap map{observable, flux_grid, freq_grid, Eigen::MatrixXd::Constant(nf, nw, nan), Eigen::MatrixXd(), {}};
    map.row_errors.assign(static_cast<std::size_t>(nf), "");
    Eigen::MatrixXd absorbed = Eigen::MatrixXd::Constant(nf, nw, nan);
    for (Eigen::Index i = 0; i < nf; ++i) {
        try {
            const SystemModel m = model.with_flux(flux_grid[i]);
            for (Eigen::Index j = 0; j < nw; ++j) {
                if (observable == Observable::r_ac) {
                    map.values(i, j) = std::norm(acoustic_reflection(m, freq_grid[j]));
                } else {
                    map.values(i, j) = std::norm(gate_reflection(m, freq_grid[j]));
                    absorbed(i, j) = gate_absorption(m, freq_grid[j]);
                }
            }
        } catch (const DomainError& e) {
            map.row_errors[static_cast<std::size_t>(i)] = e.what();
            map.values.row(i).setConstant(nan);
            absorbed.row(i).setConstant(nan);
        }
    }
    if (observable == Observable::r_g) {
        double mx = 0.0;
        for (Eigen::Index i = 0; i < nf; ++i)
            if (map.row_valid(i)) mx = std::max(mx, absorbed.row(i).maxCoeff());
        map.inverted = mx > 0.0 ? Eigen::MatrixXd(absorbed / mx) : absorbed;
    }
    return map;
}

}  // namespace cqad
