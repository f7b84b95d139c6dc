#pragma once

#include <numbers>

namespace levspin {

// SI constants used throughout the classical (magnetostatics) layer.
// Quantum modules work in angular-frequency units and never touch these.
namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double mu0 = 4.0 * pi * 1e-7;           // vacuum permeability [T m / A]
inline constexpr double hbar = 1.054571817e-34;          // reduced Planck constant [J s]
inline constexpr double g_earth = 9.8;                   // gravitational acceleration [m / s^2]

// Electron gyromagnetic ratio, g_e * mu_B with g_e = 2 and mu_B = 14 MHz/mT,
// expressed as an angular frequency per tesla.
inline constexpr double gamma_e = 2.0 * pi * 28.0e9;     // [rad / (s T)]

// NV ground-state zero-field splitting, D / 2pi = 2.87 GHz.
inline constexpr double nv_zero_field_splitting = 2.0 * pi * 2.87e9;  // [rad / s]

}  // namespace constants

/// Angular frequency -> ordinary frequency.
inline constexpr double to_hz(double omega) { return omega / (2.0 * constants::pi); }

/// Ordinary frequency -> angular frequency.
inline constexpr double from_hz(double f) { return 2.0 * constants::pi * f; }

}  // namespace levspin
