#include "cqad/materials.hpp"

#include <cmath>
#include <fstream>

#include "cqad/constants.hpp"
#include "cqad/errors.hpp"

namespace cqad {

void validate(const MaterialParams& mat) {
    if (!(mat.K2 >= 0.0 && mat.K2 < 1.0))
        throw DomainError("material '" + mat.name + "': K2 must lie in [0, 1)");
    if (!(mat.v_s > 0.0) || !std::isfinite(mat.v_s))
        throw DomainError("material '" + mat.name + "': v_s must be positive");
    if (!(mat.eps_inf > vacuum_permittivity) || !std::isfinite(mat.eps_inf))
        throw DomainError("material '" + mat.name + "': eps_inf must exceed vacuum permittivity");
}

double characteristic_impedance(const MaterialParams& mat, double W, double omega) {
    if (!(W > 0.0)) throw DomainError("overlap W must be positive");
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    return mat.K2 / (W * mat.eps_inf * omega);
}

double coupling_capacitance(const MaterialParams& mat, double W, FingerStyle style) {
    if (!(W > 0.0)) throw DomainError("overlap W must be positive");
    const double c = mat.eps_inf * W;
    return style == FingerStyle::single ? c : c / std::sqrt(2.0);
}

LineConstants line_constants(const MaterialParams& mat, double W, double omega) {
    const double z0 = characteristic_impedance(mat, W, omega);
    if (!(z0 > 0.0)) throw DomainError("line constants need K2 > 0");
    return {z0, z0 / mat.v_s, 1.0 / (z0 * mat.v_s), omega};
}

namespace {

double number_at(const nlohmann::json& j, const char* key, const std::string& path) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + "/" + key, "expected a number");
    return v.get<double>();
}

}  // namespace

MaterialParams material_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (key != "name" && key != "K2" && key != "K2_percent" && key != "v_s_m_per_s" && key != "eps_inf_F_per_m")
            throw ConfigError(path + "/" + key, "unknown field");

    MaterialParams m;
    if (!j.contains("name") || !j["name"].is_string()) throw ConfigError(path + "/name", "required string");
    m.name = j["name"].get<std::string>();

    const bool frac = j.contains("K2"), pct = j.contains("K2_percent");
    if (frac == pct) throw ConfigError(path, "give exactly one of K2 (fraction) or K2_percent");
    m.K2 = frac ? number_at(j, "K2", path) : number_at(j, "K2_percent", path) / 100.0;
    if (!(m.K2 >= 0.0 && m.K2 < 1.0)) throw ConfigError(path + (frac ? "/K2" : "/K2_percent"), "out of range");

    if (!j.contains("v_s_m_per_s")) throw ConfigError(path + "/v_s_m_per_s", "required");
    m.v_s = number_at(j, "v_s_m_per_s", path);
    if (!(m.v_s > 0.0)) throw ConfigError(path + "/v_s_m_per_s", "must be positive");

    m.eps_inf = j.contains("eps_inf_F_per_m") ? number_at(j, "eps_inf_F_per_m", path) : default_eps_inf;
    if (!(m.eps_inf > vacuum_permittivity))
        throw ConfigError(path + "/eps_inf_F_per_m", "must exceed vacuum permittivity");
    return m;
}

MaterialDatabase MaterialDatabase::builtin() {
    MaterialDatabase db;
    db.entries_ = {
        {"GaAs", 0.0007, 3000.0, default_eps_inf},
        {"LiNbO3", 0.048, 3000.0, default_eps_inf},
    };
    return db;
}

MaterialDatabase MaterialDatabase::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("", "material database must be a JSON array");
    MaterialDatabase db;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto m = material_from_json(j[i], "/" + std::to_string(i));
        if (db.contains(m.name))
            throw ConfigError("/" + std::to_string(i) + "/name", "duplicate material '" + m.name + "'");
        db.entries_.push_back(std::move(m));
    }
    return db;
}

MaterialDatabase MaterialDatabase::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open material database");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
    return from_json(j);
}

bool MaterialDatabase::contains(const std::string& name) const {
    for (const auto& m : entries_)
        if (m.name == name) return true;
    return false;
}

const MaterialParams& MaterialDatabase::find(const std::string& name) const {
    for (const auto& m : entries_)
        if (m.name == name) return m;
    throw DomainError("unknown material '" + name + "'");
}

}  // namespace cqad
