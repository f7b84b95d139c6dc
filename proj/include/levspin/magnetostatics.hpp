#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "levspin/constants.hpp"
#include "levspin/params.hpp"
#include "levspin/table.hpp"

// Classical layer: levitation potential of a hard magnetic sphere above a
// type-II superconductor (frozen-image model), trap stiffness, zero-point
// fluctuation, and the spin-phonon / current-drive coupling strengths.
//
// Coordinates follow the levitation geometry: x is the vertical axis
// (gravity), z is the NV coupling axis, y is transverse. Positions passed to
// the dimensionless potential are in units of the magnet radius a.

namespace levspin::maglev {

struct TrapSummary {
  double k_ma = 0.0;        // trap stiffness [N/m]
  double omega_ma = 0.0;    // angular trap frequency [rad/s]
  double z0 = 0.0;          // zero-point fluctuation [m]
  double alpha_crit = 0.0;  // gravity-to-magnetics length scale [m]
  double U_s = 0.0;         // potential energy scale [J]

  double omega_ma_hz() const { return to_hz(omega_ma); }
};

namespace detail {

inline void check_position(double xs) {
  if (!(xs >= 1.0))
    throw std::domain_error("magnetostatics: magnet centre below surface clearance (x < a)");
}

}  // namespace detail

/// Gravity-to-magnetics length scale alpha_crit = B_r^2 / (16 g rho mu0).
inline double alpha_crit(const PhysicalParams& p) {
  return p.B_r * p.B_r / (16.0 * constants::g_earth * p.rho * constants::mu0);
}

/// Energy scale U_s = m g alpha_crit of the dimensionless potential.
inline double potential_scale(const PhysicalParams& p) {
  return p.mass() * constants::g_earth * alpha_crit(p);
}

/// Dimensionless levitation potential u_s = alpha_s x_s + g_u at position
/// (xs, ys, zs) in units of a, for magnet orientation (theta, phi).
///
/// g_u sums the image-dipole repulsion and the frozen-dipole attraction; the
/// cooldown orientation (theta_cool, phi_cool) and height h_cool are taken
/// from the parameter record. Throws std::domain_error at singular geometry.
inline double dimensionless_potential(const PhysicalParams& p, double xs, double ys, double zs,
                                      double theta, double phi) {
  detail::check_position(xs);
  const double hs = p.h_cool / p.a;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ctc = std::cos(p.theta_cool), stc = std::sin(p.theta_cool);

  const double xh = xs + hs;
  const double r2 = xh * xh + ys * ys + zs * zs;
  if (r2 <= 0.0) throw std::domain_error("magnetostatics: frozen-dipole singularity");

  const double g_c = (xh * xh + ys * ys - 2.0 * zs * zs) * ctc + 3.0 * zs * xh * stc;
  const double g_s = (-3.0 * zs * xh * cp - 3.0 * zs * ys * sp) * ctc +
                     ((2.0 * xh * xh - ys * ys - zs * zs) * cp + 3.0 * ys * xh * sp) * stc;

  const double image = (1.0 + cp * st * cp * st) / (3.0 * xs * xs * xs);
  const double frozen = (16.0 / 3.0) * (g_c * ct + g_s * st) / std::pow(r2, 2.5);

  const double alpha_s = p.a / alpha_crit(p);
  const double u = alpha_s * xs + image - frozen;
  if (!std::isfinite(u)) throw std::domain_error("magnetostatics: potential not finite");
  return u;
}

/// Closed form of u_s on the z-line through the equilibrium (x = h_eq, y = 0),
/// at the cooldown orientation. zs in units of a.
inline double axial_potential(const PhysicalParams& p, double zs) {
  const double hs_eq = p.h_eq / p.a;
  const double hsum = (p.h_eq + p.h_cool) / p.a;
  const double alpha_s = p.a / alpha_crit(p);
  const double frozen =
      (16.0 / 3.0) * (2.0 * zs * zs - hsum * hsum) / std::pow(hsum * hsum + zs * zs, 2.5);
  return frozen + 1.0 / (3.0 * hs_eq * hs_eq * hs_eq) + alpha_s * hs_eq;
}

/// Trap stiffness of the axial harmonic approximation,
/// k_ma = 3 mu0 mu_m^2 / (4 pi (h_eq + h_cool)^5).
///
/// This is the published closed form, adopted as the ground truth for the
/// oscillator chain (omega_ma, z0, lambda) throughout the library. Note that
/// the exact curvature of the frozen-image potential along z is 3x this
/// value; see README "Conventions" for the discrepancy record.
inline double trap_stiffness(const PhysicalParams& p) {
  const double mu_m = p.magnetic_moment();
  const double hsum = p.h_eq + p.h_cool;
  return 3.0 * constants::mu0 * mu_m * mu_m /
         (4.0 * constants::pi * hsum * hsum * hsum * hsum * hsum);
}

/// Finite-difference curvature d^2U/dz^2 of the axial potential at z = 0 [N/m].
inline double axial_curvature_fd(const PhysicalParams& p, double step_s = 1e-4) {
  const double u0 = axial_potential(p, 0.0);
  const double up = axial_potential(p, step_s);
  const double um = axial_potential(p, -step_s);
  return potential_scale(p) * (up + um - 2.0 * u0) / (step_s * step_s * p.a * p.a);
}

inline TrapSummary trap_summary(const PhysicalParams& p) {
  p.validate();
  TrapSummary s;
  s.k_ma = trap_stiffness(p);
  if (!(s.k_ma > 0.0)) throw std::domain_error("trap_summary: no trap (k_ma <= 0; check B_r)");
  s.omega_ma = std::sqrt(s.k_ma / p.mass());
  s.z0 = std::sqrt(constants::hbar / (2.0 * p.mass() * s.omega_ma));
  s.alpha_crit = alpha_crit(p);
  s.U_s = potential_scale(p);
  return s;
}

/// Magnetic-field gradient dB_z/dz produced by the magnet at the NV, B_r a^3 / d^4.
inline double field_gradient_at_nv(const PhysicalParams& p) {
  if (!(p.d > p.a)) throw std::domain_error("field_gradient_at_nv: NV inside the magnet (d <= a)");
  return p.B_r * p.a * p.a * p.a / (p.d * p.d * p.d * p.d);
}

/// Spin-phonon coupling lambda = gamma_e B_r a^3 z0 / d^4 [rad/s].
inline double spin_magnet_coupling(const PhysicalParams& p) {
  const TrapSummary t = trap_summary(p);
  return constants::gamma_e * field_gradient_at_nv(p) * t.z0;
}

struct DriveCoupling {
  double k_cu = 0.0;  // modulated stiffness amplitude [N/m]
  double g_cu = 0.0;  // two-phonon drive strength [rad/s]
};

/// Drive-current coupling. k_cu sums the origin- and image-wire terms;
/// g_cu = k_cu z0^2 / (2 hbar) as an angular frequency.
inline DriveCoupling current_drive_coupling(const PhysicalParams& p) {
  if (p.h_cu == p.h_eq)
    throw std::domain_error("current_drive_coupling: wire at the equilibrium height (singular)");
  const TrapSummary t = trap_summary(p);
  const double dmin = std::abs(p.h_cu - p.h_eq);
  const double dplus = p.h_cu + p.h_eq;
  DriveCoupling c;
  c.k_cu = constants::mu0 * p.magnetic_moment() * p.I_0 / (2.0 * constants::pi) *
           (1.0 / (dmin * dmin * dmin) + 1.0 / (dplus * dplus * dplus));
  c.g_cu = c.k_cu * t.z0 * t.z0 / (2.0 * constants::hbar);
  return c;
}

/// Field magnitude of an infinite straight wire at distance r.
inline double wire_field(double current, double r) {
  if (!(r > 0.0)) throw std::domain_error("wire_field: point on the wire");
  return constants::mu0 * current / (2.0 * constants::pi * r);
}

struct NvFieldReport {
  double origin = 0.0;  // field of the drive wire [T]
  double image = 0.0;   // field of its superconductor image [T]
  double total = 0.0;
  bool static_field_dominates = false;  // B_0 >= 10 * total
};

/// Drive-current field at the NV position (h_eq, 0, d); wires run along y at
/// heights +-h_cu.
inline NvFieldReport current_field_at_nv(const PhysicalParams& p) {
  NvFieldReport rep;
  const double r_or = std::hypot(p.h_cu - p.h_eq, p.d);
  const double r_im = std::hypot(p.h_cu + p.h_eq, p.d);
  rep.origin = wire_field(p.I_0, r_or);
  rep.image = wire_field(p.I_0, r_im);
  rep.total = rep.origin + rep.image;
  rep.static_field_dominates = p.B_0 >= 10.0 * rep.total;
  return rep;
}

/// Golden-section minimum of f on [lo, hi] to absolute tolerance tol.
inline double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tol = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d; d = c; fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

/// Numeric equilibrium height (units of a) of the axial-x potential at the
/// cooldown orientation. Gravity shifts it below h_cool by ~alpha_s.
inline double find_equilibrium_height(const PhysicalParams& p) {
  auto u = [&](double xs) { return dimensionless_potential(p, xs, 0.0, 0.0, p.theta_cool, p.phi_cool); };
  return golden_section_minimize(u, 1.0 + 1e-9, 10.0 * p.h_cool / p.a, 1e-12);
}

enum class Plane { zy, zx, thetaphi, zline };

struct GridSpec {
  double lo1 = 0.0, hi1 = 0.0;
  int n1 = 0;
  double lo2 = 0.0, hi2 = 0.0;
  int n2 = 0;  // 0 for 1-D grids
};

struct PotentialMap {
  Table table;
  int flagged_cells = 0;  // singular grid points, emitted as nan
};

/// Map u_s over a coordinate plane (lengths in units of a, angles in rad).
/// Singular grid points become nan cells and are counted, never aborting the map.
inline PotentialMap potential_map(const PhysicalParams& p, Plane plane, const GridSpec& g) {
  if (g.n1 < 1 || (plane != Plane::zline && g.n2 < 1))
    throw std::invalid_argument("potential_map: empty grid");
  const double xeq = p.h_eq / p.a;
  PotentialMap out;

  auto axis = [](double lo, double hi, int n, int i) {
    return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  };
  auto eval = [&](double xs, double ys, double zs, double th, double ph) {
    try {
      return dimensionless_potential(p, xs, ys, zs, th, ph);
    } catch (const std::domain_error&) {
      ++out.flagged_cells;
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  switch (plane) {
    case Plane::zline: {
      out.table = Table({"z[a]", "u_s[1]"});
      for (int i = 0; i < g.n1; ++i) {
        const double zs = axis(g.lo1, g.hi1, g.n1, i);
        out.table.append_row({zs, eval(xeq, 0.0, zs, p.theta_cool, p.phi_cool)});
      }
      break;
    }
    case Plane::zy: {
      out.table = Table({"z[a]", "y[a]", "u_s[1]"});
      for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
          const double zs = axis(g.lo1, g.hi1, g.n1, i);
          const double ys = axis(g.lo2, g.hi2, g.n2, j);
          out.table.append_row({zs, ys, eval(xeq, ys, zs, p.theta_cool, p.phi_cool)});
        }
      break;
    }
    case Plane::zx: {
      out.table = Table({"z[a]", "x[a]", "u_s[1]"});
      for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
          const double zs = axis(g.lo1, g.hi1, g.n1, i);
          const double xs = axis(g.lo2, g.hi2, g.n2, j);
          out.table.append_row({zs, xs, eval(xs, 0.0, zs, p.theta_cool, p.phi_cool)});
        }
      break;
    }
    case Plane::thetaphi: {
      out.table = Table({"theta[rad]", "phi[rad]", "u_s[1]"});
      for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
          const double th = axis(g.lo1, g.hi1, g.n1, i);
          const double ph = axis(g.lo2, g.hi2, g.n2, j);
          out.table.append_row({th, ph, eval(xeq, 0.0, 0.0, th, ph)});
        }
      break;
    }
  }
  return out;
}

}  // namespace levspin::maglev
