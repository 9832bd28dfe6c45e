#include "cqad/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cqad/cli/output.hpp"
#include "cqad/constants.hpp"
#include "cqad/spectral.hpp"

namespace cqad::cli {

namespace fs = std::filesystem;
using nlohmann::json;

MaterialDatabase load_database(const CommonOptions& opt) {
    return opt.materials ? MaterialDatabase::from_file(*opt.materials) : MaterialDatabase::builtin();
}

Scenario resolve_scenario(const CommonOptions& opt, const MaterialDatabase& db) {
    if (!opt.scenario) throw ConfigError("--scenario", "required for this command");
    Scenario s = load_scenario(*opt.scenario, db);
    if (opt.approx_csigma) s.approx_csigma = true;
    return s;
}

namespace {

fs::path out_file(const CommonOptions& opt, const Scenario& s, const std::string& suffix) {
    return opt.out_dir / (s.name + "_" + suffix);
}

void require_gate_outputs(const SystemModel& m, const std::vector<Observable>& obs, const std::string& path) {
    for (std::size_t i = 0; i < obs.size(); ++i)
        if ((obs[i] == Observable::r_g || obs[i] == Observable::t_ac_g) && !m.gate_enabled())
            throw ConfigError(path + "/" + std::to_string(i), to_string(obs[i]) + " needs C_g_F > 0");
}

void print_header(std::ostream& out, const Scenario& s, const SystemModel& m) {
    out << std::setprecision(6);
    out << "scenario " << s.name << ": " << m.mat().name << ", n = " << m.n() << ", f_IDT = "
        << m.omega_idt() / (two_pi * 1e9) << " GHz, omega_0/omega_IDT = " << m.omega_0() / m.omega_idt()
        << (m.approx_csigma() ? " (C_sigma = n C_c)" : "") << '\n';
}

void write_json(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

}  // namespace

int cmd_spectrum(const CommonOptions& opt, std::ostream& out) {
    const auto db = load_database(opt);
    const Scenario s = resolve_scenario(opt, db);
    const SystemModel m = build_model(s);
    require_gate_outputs(m, s.outputs, "/outputs");

    Sweep sw;
    if (s.sweep) {
        if (s.sweep->kind != SweepKind::frequency) throw ConfigError("/sweep/kind", "spectrum needs a frequency sweep");
        sw = *s.sweep;
    }
    if (opt.points) {
        if (*opt.points < 2) throw ConfigError("--points", "must be >= 2");
        sw.points = *opt.points;
    }
    const Eigen::ArrayXd grid = frequency_grid(m, sw.lo, sw.hi, sw.points, sw.ghz);
    const Eigen::ArrayXd x = grid / m.omega_idt();

    print_header(out, s, m);
    const cplx g = damping(m, m.omega_idt());
    const auto crit = cavity_criterion(m.mat().K2, m.n());
    out << "Re gamma(omega_IDT)/omega_0 = " << g.real() / m.omega_0() << ", criterion lhs = " << crit.lhs
        << (crit.satisfied ? " (cavity)" : " (antenna)") << '\n';

    std::vector<Series> series;
    for (const Observable o : s.outputs) {
        const ResponseSpectrum sp = sample(m, o, grid);
        const fs::path p = out_file(opt, s, to_string(o) + ".csv");
        write_spectrum_csv(p, sp);
        out << "wrote " << p.string() << '\n';
        if (o == Observable::chi || o == Observable::admittance || o == Observable::gamma_n)
            series.push_back({"|" + to_string(o) + "|^2 / max", x, sp.normalized_abs2()});
        else
            series.push_back({"|" + to_string(o) + "|^2", x, sp.abs2()});
        if (o == Observable::chi) {
            for (const auto& pk : find_peaks(grid, sp.abs2()))
                out << "|chi|^2 peak at omega/omega_IDT = " << pk.omega / m.omega_idt()
                    << ", FWHM/omega_0 = " << pk.fwhm / m.omega_0() << '\n';
        }
    }
    const fs::path fp = out_file(opt, s, "factors.csv");
    write_factors_csv(fp, m.n(), grid, m.tau());
    const fs::path svg = out_file(opt, s, "spectrum.svg");
    write_line_svg(svg, s.name + ": response spectra", "omega / omega_IDT", "|.|^2", series);
    out << "wrote " << fp.string() << '\n' << "wrote " << svg.string() << '\n';
    return exit_ok;
}

int cmd_criterion(const CommonOptions& opt, const CriterionOptions& copt, std::ostream& out) {
    const auto db = load_database(opt);
    std::vector<MaterialParams> mats;
    std::optional<Scenario> s;
    if (opt.scenario) {
        s = resolve_scenario(opt, db);
        mats.push_back(s->material);
    } else if (copt.material) {
        mats.push_back(db.find(*copt.material));
    } else {
        mats = db.entries();
    }
    if (copt.K2) {
        if (!(*copt.K2 >= 0.0 && *copt.K2 < 1.0)) throw ConfigError("--K2", "must lie in [0, 1)");
        for (auto& mt : mats) mt.K2 = *copt.K2;
    }
    if (copt.n_lo < 1 || copt.n_hi < copt.n_lo) throw ConfigError("--n", "needs 1 <= lo <= hi");

    struct Row {
        std::string name;
        double K2;
        int n;
    };
    std::vector<Row> rows;
    const bool k2_sweep = s && s->sweep && s->sweep->kind == SweepKind::K2;
    for (const auto& mt : mats) {
        if (k2_sweep) {
            const auto ks = Eigen::ArrayXd::LinSpaced(s->sweep->points, s->sweep->lo, s->sweep->hi);
            for (double k : ks) rows.push_back({mt.name, k, s->geometry.n});
        } else {
            int lo = copt.n_lo, hi = copt.n_hi;
            if (s && s->sweep && s->sweep->kind == SweepKind::n) {
                lo = static_cast<int>(s->sweep->lo);
                hi = static_cast<int>(s->sweep->hi);
            }
            for (int n = lo; n <= hi; ++n) rows.push_back({mt.name, mt.K2, n});
        }
    }

    std::vector<std::vector<std::string>> csv;
    out << std::left << std::setw(10) << "material" << std::setw(12) << "K2" << std::setw(6) << "n" << std::setw(12)
        << "lhs" << std::setw(11) << "satisfied" << std::setw(14) << "gamma0/omega0" << "gamma0*T0" << '\n';
    for (const auto& r : rows) {
        const auto c = cavity_criterion(r.K2, r.n);
        out << std::setw(10) << r.name << std::setw(12) << std::setprecision(6) << r.K2 << std::setw(6) << r.n
            << std::setw(12) << c.lhs << std::setw(11) << (c.satisfied ? "yes" : "no") << std::setw(14)
            << c.gamma0_over_omega0 << c.gamma0_T0 << '\n';
        csv.push_back({r.name, fmt(r.K2), std::to_string(r.n), fmt(c.lhs), c.satisfied ? "true" : "false",
                       fmt(c.gamma0_over_omega0), fmt(c.gamma0_T0)});
    }
    out << std::right;
    for (const auto& mt : mats) {
        const auto nmin = minimal_cavity_n(mt.K2);
        if (nmin)
            out << mt.name << ": cavity regime from n = " << *nmin << '\n';
        else
            out << mt.name << ": no cavity regime at K2 = 0\n";
    }
    const fs::path p = opt.out_dir / ((s ? s->name + "_" : std::string()) + "criterion.csv");
    write_csv(p, {"material", "K2", "n", "lhs", "satisfied", "gamma0_over_omega0", "gamma0_T0"}, csv);
    out << "wrote " << p.string() << '\n';
    return exit_ok;
}

int cmd_poles(const CommonOptions& opt, std::ostream& out) {
    const auto db = load_database(opt);
    const Scenario s = resolve_scenario(opt, db);
    const SystemModel m = build_model(s);
    const PoleSet ps = find_poles(m);

    json j;
    j["poles"] = json::array();
    for (const auto& z : ps.poles) j["poles"].push_back({{"re_rad_s", z.real()}, {"im_rad_s", z.imag()}});
    j["classification"] = to_string(ps.classification);
    j["residual_norms"] = ps.residual_norms;
    j["zero_count"] = ps.zero_count;
    j["search_region"] = {{"re_min_rad_s", ps.search_region.re_min},
                          {"re_max_rad_s", ps.search_region.re_max},
                          {"im_min_rad_s", ps.search_region.im_min},
                          {"im_max_rad_s", ps.search_region.im_max}};
    j["omega_idt_rad_s"] = m.omega_idt();
    const fs::path p = out_file(opt, s, "poles.json");
    write_json(p, j);
    out << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_fluxmap(const CommonOptions& opt, std::ostream& out) {
    const auto db = load_database(opt);
    const Scenario s = resolve_scenario(opt, db);
    const SystemModel m = build_model(s);
    Sweep sw;
    sw.kind = SweepKind::flux;
    sw.lo = -0.6;
    sw.hi = 0.6;
    sw.points = 101;
    if (s.sweep) {
        if (s.sweep->kind != SweepKind::flux) throw ConfigError("/sweep/kind", "fluxmap needs a flux sweep");
        sw = *s.sweep;
    }
    if (opt.points) {
        if (*opt.points < 2) throw ConfigError("--points", "must be >= 2");
        sw.freq_points = *opt.points;
    }
    for (std::size_t i = 0; i < sw.observables.size(); ++i)
        if (sw.observables[i] == Observable::r_g && !m.gate_enabled())
            throw ConfigError("/sweep/observables/" + std::to_string(i), "r_g needs C_g_F > 0");

    const Eigen::ArrayXd flux = Eigen::ArrayXd::LinSpaced(sw.points, sw.lo, sw.hi);
    const Eigen::ArrayXd freq = frequency_grid(m, sw.freq_lo, sw.freq_hi, sw.freq_points, sw.freq_ghz);
    const Eigen::ArrayXd fghz = freq / (two_pi * 1e9);

    print_header(out, s, m);
    try {
        out << "omega_0(phi) = omega_IDT at phi_ext = +/-" << flux_for_frequency(m, m.omega_idt()) << '\n';
    } catch (const DomainError&) {
        out << "omega_0(phi) never reaches omega_IDT on the valid branch\n";
    }
    for (const Observable o : sw.observables) {
        const FluxMap map = flux_map(m, flux, freq, o);
        Eigen::Index invalid = 0;
        for (Eigen::Index i = 0; i < flux.size(); ++i) invalid += map.row_valid(i) ? 0 : 1;
        const std::string base = "fluxmap_" + to_string(o);
        write_fluxmap_csv(out_file(opt, s, base + ".csv"), map, map.values);
        write_heatmap_svg(out_file(opt, s, base + ".svg"), s.name + ": |" + to_string(o) + "|^2", "f (GHz)",
                          "phi_ext / Phi_0", fghz, flux, map.values);
        out << "wrote " << out_file(opt, s, base + ".csv").string() << " (" << invalid << " invalid flux rows)\n";
        if (o == Observable::r_g) {
            write_fluxmap_csv(out_file(opt, s, base + "_inverted.csv"), map, map.inverted);
            write_heatmap_svg(out_file(opt, s, base + "_inverted.svg"),
                              s.name + ": 1 - |r_g|^2, normalized", "f (GHz)", "phi_ext / Phi_0", fghz, flux,
                              map.inverted);
            out << "wrote " << out_file(opt, s, base + "_inverted.csv").string() << '\n';
        }
    }
    return exit_ok;
}

namespace {

struct Agreement {
    double deviation = 0.0;  // max |td - fd| / max |fd|
    double phase_error = 0.0;
};

Agreement compare(const ResponseSpectrum& td, const Eigen::ArrayXcd& fd) {
    const double scale = fd.abs().maxCoeff();
    const double diff = (td.values - fd).abs().maxCoeff();
    return {scale > 0.0 ? diff / scale : diff, 0.0};
}

}  // namespace

int cmd_timedomain(const CommonOptions& opt, std::ostream& out) {
    const auto db = load_database(opt);
    const Scenario s = resolve_scenario(opt, db);
    const SystemModel m = build_model(s);
    const auto& cfg = s.timedomain;
    if (cfg.gate_port && !m.gate_enabled()) throw ConfigError("/timedomain/gate_port", "needs C_g_F > 0");
    print_header(out, s, m);

    const double n = m.n(), w = m.omega_idt();
    const double lo = w * (1.0 - 1.0 / n), hi = w * (1.0 + 1.0 / n);
    const DelayOptions dopt{cfg.rule, cfg.gate_port};
    const double dt = m.tau() / cfg.steps_per_tau;
    const Drive pulse = Drive::gaussian_pulse(w, cfg.sigma_over_idt * w, Port::left);
    const DelaySystem sys = build_delay_system(m, dt, pulse, dopt);
    const TimeDomainScattering sc = scattering_from_time_domain(sys, lo, hi);
    const EnergyReport er = energy_audit(sc.trace, sys, cfg.energy_tolerance);

    const auto& grid = sc.reflection.grid;
    Eigen::ArrayXcd r_fd(grid.size()), t_fd(grid.size());
    const cplx I(0.0, 1.0);
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        if (cfg.gate_port) {
            const Eigen::Matrix3cd S = scattering_matrix(m, grid[k], Normalization::flux);
            r_fd[k] = S(0, 0) * std::exp(I * (grid[k] * m.tau() * (n - 1)));
            t_fd[k] = S(1, 0) * std::exp(-I * (grid[k] * m.tau()));
        } else {
            r_fd[k] = acoustic_reflection(m, grid[k]);
            t_fd[k] = acoustic_transmission(m, grid[k]);
        }
    }
    const Agreement ar = compare(sc.reflection, r_fd), at = compare(sc.transmission, t_fd);
    double phase = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k)
        phase = std::max(phase, std::abs(std::arg(sc.transmission.values[k] * std::exp(I * (grid[k] * m.tau() * n)))));

    bool ok = ar.deviation <= cfg.tolerance && at.deviation <= cfg.tolerance && er.conserved;
    out << std::setprecision(4) << "dt = tau/" << sys.steps_per_tau << ", " << sc.trace.size() << " steps, band "
        << lo / w << ".." << hi / w << " omega_IDT (" << grid.size() << " bins, drive margin " << sc.margin_db
        << " dB)\n";
    out << "max deviation r_ac: " << ar.deviation << ", t_ac: " << at.deviation << " (tolerance " << cfg.tolerance
        << ")\n";
    out << "energy: " << er.describe() << '\n';

    json rep;
    rep["steps_per_tau"] = sys.steps_per_tau;
    rep["band_rad_s"] = {lo, hi};
    rep["margin_db"] = sc.margin_db;
    rep["deviation_r_ac"] = ar.deviation;
    rep["deviation_t_ac"] = at.deviation;
    rep["energy"] = {{"in", er.in}, {"out_left", er.out_left}, {"out_right", er.out_right},
                     {"out_gate", er.out_gate}, {"ratio", er.ratio}, {"conserved", er.conserved}};
    if (m.mat().K2 == 0.0) {
        const bool pass = phase <= 1e-6;
        out << "pure-delay phase check: max |arg t + omega tau n| = " << phase << (pass ? " (ok)" : " (FAILED)")
            << '\n';
        rep["pure_delay_phase_error"] = phase;
        ok = ok && pass;
    }

    if (cfg.gate_port) {
        const DelaySystem gs = build_delay_system(m, dt, Drive::gaussian_pulse(w, cfg.sigma_over_idt * w, Port::gate),
                                                  dopt);
        const TimeDomainScattering gsc = scattering_from_time_domain(gs, lo, hi);
        const EnergyReport ger = energy_audit(gsc.trace, gs, cfg.energy_tolerance);
        Eigen::ArrayXcd rg(grid.size()), tg(grid.size());
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            rg[k] = gate_reflection(m, gsc.reflection.grid[k]);
            tg[k] = transduction(m, gsc.reflection.grid[k]);
        }
        const Agreement agr = compare(gsc.reflection, rg), agt = compare(gsc.transmission, tg);
        out << "gate drive: max deviation r_g: " << agr.deviation << ", t_ac_g: " << agt.deviation << '\n';
        out << "gate drive energy: " << ger.describe() << '\n';
        rep["deviation_r_g"] = agr.deviation;
        rep["deviation_t_ac_g"] = agt.deviation;
        rep["gate_energy_ratio"] = ger.ratio;
        ok = ok && agr.deviation <= cfg.tolerance && agt.deviation <= cfg.tolerance && ger.conserved;
    }
    rep["agreement"] = ok;

    const fs::path tp = out_file(opt, s, "trace.csv"), rp = out_file(opt, s, "timedomain.json");
    write_trace_csv(tp, sc.trace);
    write_json(rp, rep);
    out << "wrote " << tp.string() << '\n' << "wrote " << rp.string() << '\n';
    out << (ok ? "time and frequency domain agree\n" : "DISAGREEMENT between time and frequency domain\n");
    return ok ? exit_ok : exit_disagreement;
}

int cmd_materials_list(const CommonOptions& opt, std::ostream& out) {
    const auto db = load_database(opt);
    out << std::left << std::setw(12) << "name" << std::setw(12) << "K2 (%)" << std::setw(14) << "v_s (m/s)"
        << "eps_inf (F/m)" << '\n';
    for (const auto& m : db.entries())
        out << std::setw(12) << m.name << std::setw(12) << std::setprecision(6) << m.K2 * 100.0 << std::setw(14)
            << m.v_s << m.eps_inf << '\n';
    out << std::right;
    return exit_ok;
}

}  // namespace cqad::cli
