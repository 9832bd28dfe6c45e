#include "cqad/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad::cli {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

constexpr double kW = 720, kH = 440, kL = 80, kR = 170, kT = 40, kB = 60;

struct Axes {
    double x0, x1, y0, y1;
    double px(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
    double py(double y) const { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); }
};

void frame(std::ostream& o, const Axes& a, const std::string& title, const std::string& xl, const std::string& yl) {
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";
    o << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << escape(xl)
      << "</text>\n";
    o << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (kT + kH - kB) / 2 << ")\">" << escape(yl) << "</text>\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = a.x0 + (a.x1 - a.x0) * i / 5.0, y = a.y0 + (a.y1 - a.y0) * i / 5.0;
        o << "<text x=\"" << a.px(x) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">" << short_num(x)
          << "</text>\n";
        o << "<text x=\"" << kL - 6 << "\" y=\"" << a.py(y) + 4 << "\" text-anchor=\"end\">" << short_num(y)
          << "</text>\n";
    }
}

void box(std::ostream& o) {
    o << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
      << "\" fill=\"none\" stroke=\"black\"/>\n";
}

// Perceptually ordered dark-blue -> yellow ramp.
std::string color(double t) {
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto out = open_out(path);
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

void write_spectrum_csv(const std::filesystem::path& path, const ResponseSpectrum& s) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(s.grid.size()));
    for (Eigen::Index i = 0; i < s.grid.size(); ++i)
        rows.push_back({fmt(s.grid[i]), fmt(s.grid[i] / (two_pi * 1e9)), fmt(s.values[i].real()),
                        fmt(s.values[i].imag()), fmt(std::norm(s.values[i]))});
    write_csv(path, {"omega_rad_s", "freq_GHz", "re", "im", "abs2"}, rows);
}

void write_fluxmap_csv(const std::filesystem::path& path, const FluxMap& map, const Eigen::MatrixXd& values) {
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index i = 0; i < map.flux_grid.size(); ++i)
        for (Eigen::Index j = 0; j < map.freq_grid.size(); ++j)
            rows.push_back({fmt(map.flux_grid[i]), fmt(map.freq_grid[j] / (two_pi * 1e9)), fmt(values(i, j))});
    write_csv(path, {"flux_phi0", "freq_GHz", "abs2"}, rows);
}

void write_trace_csv(const std::filesystem::path& path, const TimeTrace& tr) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(tr.size()));
    for (Eigen::Index i = 0; i < tr.size(); ++i)
        rows.push_back({fmt(tr.t[i]), fmt(tr.pJ[i]), fmt(tr.phi_out_left[i]), fmt(tr.phi_out_right[i]),
                        fmt(tr.phi_out_gate[i])});
    write_csv(path, {"t_s", "pJ", "out_left", "out_right", "out_gate"}, rows);
}

void write_factors_csv(const std::filesystem::path& path, int n, const Eigen::ArrayXd& omega, double tau) {
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        const auto f = spectral_factors(n, omega[i], tau);
        rows.push_back({fmt(omega[i]), fmt(f.A.real()), fmt(f.A.imag()), fmt(f.H.real()), fmt(f.H.imag())});
    }
    write_csv(path, {"omega_rad_s", "re_A", "im_A", "re_H", "im_H"}, rows);
}

void write_line_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    Axes a{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (const auto& s : series)
        for (Eigen::Index i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            a.x0 = std::min(a.x0, s.x[i]);
            a.x1 = std::max(a.x1, s.x[i]);
            a.y0 = std::min(a.y0, s.y[i]);
            a.y1 = std::max(a.y1, s.y[i]);
        }
    if (!(a.x1 > a.x0)) a = {0, 1, a.y0, a.y1};
    if (!(a.y1 > a.y0)) { a.y0 -= 0.5; a.y1 += 0.5; }
    a.y0 = std::min(a.y0, 0.0);

    auto out = open_out(path);
    frame(out, a, title, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = palette[k % 7];
        out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.3\" points=\"";
        for (Eigen::Index i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.y[i])) out << short_num(a.px(s.x[i])) << ',' << short_num(a.py(s.y[i])) << ' ';
        out << "\"/>\n";
        const double ly = kT + 14 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kW - kR + 36 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kW - kR + 42 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    box(out);
    out << "</svg>\n";
}

void write_heatmap_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                       const Eigen::MatrixXd& v) {
    double lo = INFINITY, hi = -INFINITY;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::isfinite(v.data()[i])) {
            lo = std::min(lo, v.data()[i]);
            hi = std::max(hi, v.data()[i]);
        }
    if (!(hi > lo)) { lo = 0.0; hi = 1.0; }
    const Axes a{x[0], x[x.size() - 1], y[0], y[y.size() - 1]};
    auto out = open_out(path);
    frame(out, a, title, xlabel, ylabel);
    const double cw = (kW - kL - kR) / static_cast<double>(x.size());
    const double ch = (kH - kT - kB) / static_cast<double>(y.size());
    out << "<g shape-rendering=\"crispEdges\">\n";
    for (Eigen::Index i = 0; i < y.size(); ++i)
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double val = v(i, j);
            out << "<rect x=\"" << short_num(kL + j * cw) << "\" y=\"" << short_num(kH - kB - (i + 1) * ch)
                << "\" width=\"" << short_num(cw + 0.05) << "\" height=\"" << short_num(ch + 0.05) << "\" fill=\""
                << (std::isfinite(val) ? color((val - lo) / (hi - lo)) : std::string("#bbbbbb")) << "\"/>\n";
        }
    out << "</g>\n";
    for (int k = 0; k <= 20; ++k) {
        const double t = k / 20.0;
        out << "<rect x=\"" << kW - kR + 20 << "\" y=\"" << short_num(kH - kB - (k + 1) * (kH - kT - kB) / 21.0)
            << "\" width=\"20\" height=\"" << short_num((kH - kT - kB) / 21.0 + 0.05) << "\" fill=\"" << color(t)
            << "\"/>\n";
    }
    out << "<text x=\"" << kW - kR + 46 << "\" y=\"" << kT + 10 << "\">" << short_num(hi) << "</text>\n";
    out << "<text x=\"" << kW - kR + 46 << "\" y=\"" << kH - kB << "\">" << short_num(lo) << "</text>\n";
    box(out);
    out << "</svg>\n";
}

}  // namespace cqad::cli
