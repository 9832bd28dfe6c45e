#pragma once

#include <numbers>

namespace cqad {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double flux_quantum = 2.067833848461929e-15;    // Wb, h/2e

}  // namespace cqad
