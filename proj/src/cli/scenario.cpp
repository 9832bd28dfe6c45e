#include "cqad/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(path + "/" + k, "unknown field");
}

double num(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + "/" + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + "/" + key, "must be finite");
    return x;
}

double positive(const json& j, const std::string& key, const std::string& path) {
    const double x = num(j, key, path);
    if (!(x > 0.0)) throw ConfigError(path + "/" + key, "must be positive");
    return x;
}

double non_negative(const json& j, const std::string& key, const std::string& path) {
    const double x = num(j, key, path);
    if (!(x >= 0.0)) throw ConfigError(path + "/" + key, "must be non-negative");
    return x;
}

int integer(const json& j, const std::string& key, const std::string& path, int min) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path + "/" + key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < min || x > 100000000) throw ConfigError(path + "/" + key, "must be >= " + std::to_string(min));
    return static_cast<int>(x);
}

bool boolean(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(path + "/" + key, "expected a boolean");
    return v.get<bool>();
}

std::string string(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::pair<double, double> range(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    const std::string p = path + "/" + key;
    if (!v.is_array() || v.size() != 2) throw ConfigError(p, "expected [lo, hi]");
    for (int i = 0; i < 2; ++i)
        if (!v[i].is_number()) throw ConfigError(p + "/" + std::to_string(i), "expected a number");
    const double lo = v[0].get<double>(), hi = v[1].get<double>();
    if (!(hi > lo)) throw ConfigError(p, "needs lo < hi");
    return {lo, hi};
}

bool units_ghz(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) return false;
    const std::string u = string(j, key, path);
    if (u == "GHz") return true;
    if (u == "omega_idt") return false;
    throw ConfigError(path + "/" + key, "expected \"omega_idt\" or \"GHz\"");
}

Observable observable(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected an observable name");
    try {
        return observable_from_string(v.get<std::string>());
    } catch (const DomainError&) {
        throw ConfigError(path, "unknown observable '" + v.get<std::string>() + "'");
    }
}

std::vector<Observable> observables(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    const std::string p = path + "/" + key;
    if (!v.is_array()) throw ConfigError(p, "expected an array");
    std::vector<Observable> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Observable o = observable(v[i], p + "/" + std::to_string(i));
        for (auto e : out)
            if (e == o) throw ConfigError(p + "/" + std::to_string(i), "duplicate observable");
        out.push_back(o);
    }
    return out;
}

Sweep parse_sweep(const json& j, const std::string& path) {
    only_keys(j, path, {"kind", "range", "points", "units", "freq_range", "freq_points", "freq_units", "observables"});
    for (const char* k : {"kind", "range", "points"})
        if (!j.contains(k)) throw ConfigError(path + "/" + k, "required");
    Sweep s;
    const std::string kind = string(j, "kind", path);
    if (kind == "frequency") s.kind = SweepKind::frequency;
    else if (kind == "flux") s.kind = SweepKind::flux;
    else if (kind == "n") s.kind = SweepKind::n;
    else if (kind == "K2") s.kind = SweepKind::K2;
    else throw ConfigError(path + "/kind", "expected frequency, flux, n or K2");

    std::tie(s.lo, s.hi) = range(j, "range", path);
    s.points = integer(j, "points", path, 2);
    s.ghz = units_ghz(j, "units", path);
    if (s.kind == SweepKind::frequency && s.lo <= 0.0) throw ConfigError(path + "/range", "frequencies must be positive");
    if (s.kind == SweepKind::n && (s.lo < 1.0 || s.lo != std::floor(s.lo) || s.hi != std::floor(s.hi)))
        throw ConfigError(path + "/range", "n range must be integers >= 1");
    if (s.kind == SweepKind::K2 && (s.lo < 0.0 || s.hi >= 1.0)) throw ConfigError(path + "/range", "K2 must lie in [0, 1)");

    if (j.contains("freq_range")) std::tie(s.freq_lo, s.freq_hi) = range(j, "freq_range", path);
    if (s.freq_lo <= 0.0) throw ConfigError(path + "/freq_range", "frequencies must be positive");
    if (j.contains("freq_points")) s.freq_points = integer(j, "freq_points", path, 2);
    s.freq_ghz = units_ghz(j, "freq_units", path);
    if (j.contains("observables")) {
        s.observables = observables(j, "observables", path);
        for (std::size_t i = 0; i < s.observables.size(); ++i)
            if (s.observables[i] != Observable::r_g && s.observables[i] != Observable::r_ac)
                throw ConfigError(path + "/observables/" + std::to_string(i), "flux maps support r_g and r_ac");
    }
    return s;
}

}  // namespace

Scenario default_scenario(const MaterialParams& material) {
    Scenario s;
    s.name = material.name + "_default";
    s.material = material;
    s.geometry = {10, material.v_s / 3e9, 30e-6, FingerStyle::single};
    s.atom = {1e-15, 1.0, 10e-18, 50.0, 0.0};
    s.lock_to_idt = true;
    return s;
}

Scenario parse_scenario(const json& j, const MaterialDatabase& db) {
    only_keys(j, "", {"name", "description", "material", "geometry", "atom", "tuning", "approx_csigma", "outputs",
                      "sweep", "timedomain"});
    for (const char* k : {"material", "geometry", "atom"})
        if (!j.contains(k)) throw ConfigError(std::string("/") + k, "required");

    Scenario s;
    if (j.contains("name")) {
        s.name = string(j, "name", "");
        if (s.name.empty() || s.name.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.-") !=
                                  std::string::npos)
            throw ConfigError("/name", "use letters, digits, '_', '.', '-'");
    }
    if (j.contains("description")) string(j, "description", "");

    const auto& mj = j["material"];
    if (mj.is_string()) {
        const auto name = mj.get<std::string>();
        if (!db.contains(name)) throw ConfigError("/material", "unknown material '" + name + "'");
        s.material = db.find(name);
    } else {
        s.material = material_from_json(mj, "/material");
    }

    const auto& g = j["geometry"];
    only_keys(g, "/geometry", {"n", "pitch_m", "f_idt_GHz", "W_m", "finger_style"});
    for (const char* k : {"n", "W_m"})
        if (!g.contains(k)) throw ConfigError(std::string("/geometry/") + k, "required");
    s.geometry.n = integer(g, "n", "/geometry", 1);
    s.geometry.W = positive(g, "W_m", "/geometry");
    const bool has_pitch = g.contains("pitch_m"), has_f = g.contains("f_idt_GHz");
    if (has_pitch == has_f) throw ConfigError("/geometry", "give exactly one of pitch_m or f_idt_GHz");
    s.geometry.pitch = has_pitch ? positive(g, "pitch_m", "/geometry")
                                 : s.material.v_s / (positive(g, "f_idt_GHz", "/geometry") * 1e9);
    if (g.contains("finger_style")) {
        const auto st = string(g, "finger_style", "/geometry");
        if (st == "single") s.geometry.style = FingerStyle::single;
        else if (st == "double") s.geometry.style = FingerStyle::double_finger;
        else throw ConfigError("/geometry/finger_style", "expected single or double");
    }

    const auto& a = j["atom"];
    only_keys(a, "/atom", {"C_J_F", "L_J0_H", "E_J_J", "C_g_F", "Z_el_ohm", "phi_ext"});
    s.atom = {0.0, 1.0, 0.0, 50.0, 0.0};
    if (a.contains("C_J_F")) s.atom.C_J = non_negative(a, "C_J_F", "/atom");
    if (a.contains("C_g_F")) s.atom.C_g = non_negative(a, "C_g_F", "/atom");
    if (a.contains("Z_el_ohm")) s.atom.Z_el = positive(a, "Z_el_ohm", "/atom");
    if (a.contains("phi_ext")) s.atom.phi_ext = num(a, "phi_ext", "/atom");
    if (a.contains("L_J0_H") && a.contains("E_J_J")) throw ConfigError("/atom", "give L_J0_H or E_J_J, not both");
    if (a.contains("L_J0_H")) {
        s.atom.L_J0 = positive(a, "L_J0_H", "/atom");
        s.have_inductance = true;
    } else if (a.contains("E_J_J")) {
        s.atom.L_J0 = josephson_inductance(positive(a, "E_J_J", "/atom"));
        s.have_inductance = true;
    }

    if (j.contains("tuning")) {
        const auto& t = j["tuning"];
        only_keys(t, "/tuning", {"lock_to_idt", "omega0_over_idt"});
        if (t.contains("lock_to_idt")) s.lock_to_idt = boolean(t, "lock_to_idt", "/tuning");
        if (t.contains("omega0_over_idt")) s.omega0_over_idt = positive(t, "omega0_over_idt", "/tuning");
    }
    if (s.lock_to_idt && s.have_inductance)
        throw ConfigError("/tuning/lock_to_idt", "conflicts with an explicit L_J0_H / E_J_J");
    if (!s.lock_to_idt && !s.have_inductance)
        throw ConfigError("/atom", "need L_J0_H, E_J_J or tuning.lock_to_idt");

    if (j.contains("approx_csigma")) s.approx_csigma = boolean(j, "approx_csigma", "");
    if (j.contains("outputs")) s.outputs = observables(j, "outputs", "");
    if (j.contains("sweep")) s.sweep = parse_sweep(j["sweep"], "/sweep");

    if (j.contains("timedomain")) {
        const auto& t = j["timedomain"];
        only_keys(t, "/timedomain",
                  {"steps_per_tau", "sigma_over_idt", "gate_port", "rule", "tolerance", "energy_tolerance"});
        auto& td = s.timedomain;
        if (t.contains("steps_per_tau")) td.steps_per_tau = integer(t, "steps_per_tau", "/timedomain", 4);
        if (t.contains("sigma_over_idt")) td.sigma_over_idt = positive(t, "sigma_over_idt", "/timedomain");
        if (t.contains("gate_port")) td.gate_port = boolean(t, "gate_port", "/timedomain");
        if (t.contains("rule")) {
            const auto r = string(t, "rule", "/timedomain");
            if (r == "exponential") td.rule = StepRule::exponential;
            else if (r == "trapezoidal") td.rule = StepRule::trapezoidal;
            else throw ConfigError("/timedomain/rule", "expected exponential or trapezoidal");
        }
        if (t.contains("tolerance")) td.tolerance = positive(t, "tolerance", "/timedomain");
        if (t.contains("energy_tolerance")) td.energy_tolerance = positive(t, "energy_tolerance", "/timedomain");
    }

    // Full physical validation, reported against the section that failed.
    try {
        validate(s.geometry);
    } catch (const DomainError& e) {
        throw ConfigError("/geometry", e.what());
    }
    try {
        build_model(s);
    } catch (const DomainError& e) {
        throw ConfigError("/atom", e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, const MaterialDatabase& db) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open scenario");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
    return parse_scenario(j, db);
}

SystemModel build_model(const Scenario& s) {
    ModelOptions opt;
    opt.approx_csigma = s.approx_csigma;
    TransmonParams atom = s.atom;
    if (s.lock_to_idt) atom.L_J0 = 1.0;  // placeholder, replaced below
    SystemModel m(s.material, s.geometry, atom, opt);
    if (!s.lock_to_idt) return m;
    // Lock at zero flux, then apply the requested flux.
    TransmonParams at0 = atom;
    at0.phi_ext = 0.0;
    SystemModel locked = lock_to_idt(m.with_atom(at0), s.omega0_over_idt * m.omega_idt());
    return locked.with_flux(atom.phi_ext);
}

Eigen::ArrayXd frequency_grid(const SystemModel& model, double lo, double hi, int points, bool ghz) {
    const double scale = ghz ? two_pi * 1e9 : model.omega_idt();
    return Eigen::ArrayXd::LinSpaced(points, lo * scale, hi * scale);
}

}  // namespace cqad::cli
