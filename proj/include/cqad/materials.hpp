#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace cqad {

enum class FingerStyle { single, double_finger };

struct MaterialParams {
    std::string name;
    double K2 = 0.0;       // fraction, not percent
    double v_s = 0.0;      // m/s
    double eps_inf = 0.0;  // F/m
};

// Throws DomainError. K2 = 0 is allowed and describes a decoupled line.
void validate(const MaterialParams& mat);

struct LineConstants {
    double Z0;
    double L_T;
    double C_T;
    double omega_ref;
};

double characteristic_impedance(const MaterialParams& mat, double W, double omega);
double coupling_capacitance(const MaterialParams& mat, double W, FingerStyle style);
LineConstants line_constants(const MaterialParams& mat, double W, double omega);

// The paper gives no permittivities; 5e-11 F/m is a placeholder. Normalized
// observables (gamma/omega_0, reflection, criterion) do not depend on it.
inline constexpr double default_eps_inf = 5.0e-11;

class MaterialDatabase {
public:
    static MaterialDatabase builtin();
    // JSON array of {name, K2_percent | K2, v_s_m_per_s, eps_inf_F_per_m?}.
    static MaterialDatabase from_json(const nlohmann::json& j);
    static MaterialDatabase from_file(const std::filesystem::path& path);

    const MaterialParams& find(const std::string& name) const;
    bool contains(const std::string& name) const;
    const std::vector<MaterialParams>& entries() const { return entries_; }

private:
    std::vector<MaterialParams> entries_;
};

// One material object; exactly one of K2 (fraction) or K2_percent.
// Errors are ConfigError carrying the field path.
MaterialParams material_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace cqad
