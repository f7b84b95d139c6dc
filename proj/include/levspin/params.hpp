#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "levspin/constants.hpp"

namespace levspin::maglev {

/// SI-unit record of magnet, NV, trap and drive parameters.
struct PhysicalParams {
  // micromagnet
  double a = 0.0;           // radius [m]
  double rho = 0.0;         // density [kg/m^3]
  double B_r = 0.0;         // residual flux density [T]
  double h_cool = 0.0;      // cooldown height of the magnet centre [m]
  double h_eq = 0.0;        // equilibrium height [m]
  double theta_cool = 0.0;  // cooldown polar angle [rad]
  double phi_cool = 0.0;    // cooldown azimuthal angle [rad]
  double theta = 0.0;       // equilibrium polar angle [rad]
  double phi = 0.0;         // equilibrium azimuthal angle [rad]

  // NV
  double d = 0.0;           // NV-magnet distance along the coupling axis [m]
  double B_0 = 0.0;         // transverse static field [T]

  // drive current
  double I_0 = 0.0;         // drive amplitude [A]
  double h_cu = 0.0;        // wire height [m]

  double mass() const { return rho * (4.0 / 3.0) * constants::pi * a * a * a; }

  /// Magnetic moment of a uniformly magnetized sphere, mu_m = 4 pi B_r a^3 / (3 mu0).
  double magnetic_moment() const {
    return 4.0 * constants::pi * B_r * a * a * a / (3.0 * constants::mu0);
  }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("PhysicalParams: " + msg); };
    if (!(a > 0)) fail("a must be > 0 (magnet radius, m)");
    if (!(rho > 0)) fail("rho must be > 0 (density, kg/m^3)");
    if (!(B_r > 0)) fail("B_r must be > 0 (residual flux density, T)");
    if (!(h_cool >= a)) fail("h_cool must be >= a (magnet above the surface, m)");
    if (!(h_eq >= a)) fail("h_eq must be >= a (magnet above the surface, m)");
    if (!(d > a)) fail("d must be > a (NV outside the magnet, m)");
    if (!(h_cu > h_eq)) fail("h_cu must be > h_eq (wire above the magnet, m)");
    if (!std::isfinite(I_0) || I_0 < 0) fail("I_0 must be >= 0 (drive amplitude, A)");
  }
};

/// Feasibility-study preset: 0.25 um NdFeB-like sphere, NV at d = 2a.
inline PhysicalParams preset_sec5() {
  PhysicalParams p;
  p.a = 0.25e-6;
  p.rho = 7430.0;
  p.B_r = 0.75;
  p.h_cool = 3.0 * p.a;
  p.h_eq = 3.0 * p.a;
  p.theta_cool = 0.0;
  p.phi_cool = constants::pi / 2.0;
  p.theta = 0.0;
  p.phi = constants::pi / 2.0;
  p.d = 2.0 * p.a;
  p.B_0 = 31e-3;           // >= ten times the ~3.1 mT wire+image field at the NV
  p.I_0 = 10e-3;
  p.h_cu = 2.0 * p.h_eq;
  return p;
}

/// Potential-map preset: 22.4 um sphere, same material and geometry ratios.
inline PhysicalParams preset_fig2() {
  PhysicalParams p = preset_sec5();
  p.a = 22.4e-6;
  p.h_cool = 3.0 * p.a;
  p.h_eq = 3.0 * p.a;
  p.d = 2.0 * p.a;
  p.h_cu = 2.0 * p.h_eq;
  return p;
}

inline PhysicalParams preset_by_name(const std::string& name) {
  if (name == "sec5") return preset_sec5();
  if (name == "fig2") return preset_fig2();
  throw std::invalid_argument("unknown preset '" + name + "' (expected sec5 or fig2)");
}

}  // namespace levspin::maglev
