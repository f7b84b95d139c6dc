#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levspin/constants.hpp"

// Frame parameters: NV level mixing, microwave dressing, and the Bogoliubov
// squeezed frame generated by the two-phonon drive.

namespace levspin::models {

/// NV ground-state eigenbasis under a transverse field, H = D Sz^2 + delta Sx.
/// States are expressed over |+1>, |0>, |-1>.
struct NvBasis {
  double theta = 0.0;    // mixing angle, tan(2 theta) = 2 delta / D
  double omega_e = 0.0;  // [rad/s]
  double omega_g = 0.0;
  double omega_d = 0.0;
  Eigen::Vector3cd e_state, g_state, d_state;
};

inline NvBasis nv_mixed_basis(double D, double delta) {
  if (!(D > 0)) throw std::invalid_argument("nv_mixed_basis: D must be positive");
  NvBasis b;
  const double x = 2.0 * delta / D;
  b.theta = 0.5 * std::atan(x);
  const double root = std::sqrt(1.0 + x * x);
  b.omega_e = D * (1.0 + root) / 2.0;
  b.omega_g = D * (1.0 - root) / 2.0;
  b.omega_d = D;
  const double s = std::sin(b.theta), c = std::cos(b.theta);
  const double inv = 1.0 / std::sqrt(2.0);
  // bright combination |b> = (|-1> + |+1>)/sqrt(2)
  b.e_state << c * inv, s, c * inv;
  b.g_state << -s * inv, c, -s * inv;
  b.d_state << inv, 0.0, -inv;
  return b;
}

/// Microwave-dressed pair within the {|g>, |d>} block.
struct DressedBasis {
  double alpha = 0.0;        // tan(2 alpha) = Omega_p' / Delta
  double omega_plus = 0.0;   // +sqrt(Delta^2 + Omega_p'^2)/2
  double omega_minus = 0.0;
};

inline DressedBasis dressed_basis(double Delta, double Omega_p_prime) {
  if (Delta == 0.0 && Omega_p_prime == 0.0)
    throw std::invalid_argument("dressed_basis: degenerate (Delta = Omega_p' = 0)");
  DressedBasis d;
  d.alpha = 0.5 * std::atan2(Omega_p_prime, Delta);
  const double root = std::sqrt(Delta * Delta + Omega_p_prime * Omega_p_prime);
  d.omega_plus = root / 2.0;
  d.omega_minus = -root / 2.0;
  return d;
}

/// Spin-phonon coupling after both basis reductions, Lambda = lambda cos(theta) cos(alpha).
inline double effective_coupling(double lambda, double theta, double alpha) {
  return lambda * std::cos(theta) * std::cos(alpha);
}

/// Coupling at transverse field B0 and dressing angle alpha, for zero-field
/// splitting D. Feeds the coupling-map scenario.
inline double coupling_at(double lambda, double B0, double alpha,
                          double D = constants::nv_zero_field_splitting) {
  const NvBasis b = nv_mixed_basis(D, constants::gamma_e * B0);
  return effective_coupling(lambda, b.theta, alpha);
}

enum class FrameTag { lab, rotating, squeezed, sw };

inline std::string to_string(FrameTag t) {
  switch (t) {
    case FrameTag::lab: return "lab";
    case FrameTag::rotating: return "rotating";
    case FrameTag::squeezed: return "squeezed";
    case FrameTag::sw: return "sw";
  }
  return "?";
}

/// Derived frame parameters of the driven spin-oscillator model.
/// All rates are angular frequencies in the working unit system.
struct FrameSpec {
  double alpha = 0.0;       // dressing angle [rad]
  double Lambda = 0.0;      // bare coupling
  double delta0 = 0.0;      // spin detuning
  double delta_m = 0.0;     // oscillator detuning
  double g_cu = 0.0;        // two-phonon drive strength
  double r = 0.0;           // squeezing parameter, tanh(2r) = g_cu / delta_m
  double Lambda_eff = 0.0;  // Lambda e^r / 2
  double Delta_m = 0.0;     // delta_m / cosh(2r)
  double xi = 0.0;          // Lambda_eff^2 / Delta_m
  FrameTag tag = FrameTag::lab;
};

/// Squeezed-frame parameters for a given drive. Requires |g_cu| < delta_m;
/// at or beyond that boundary the quadratic form is unstable and the frame
/// does not exist.
inline FrameSpec bogoliubov_frame(double delta_m, double g_cu, double Lambda,
                                  double delta0 = 0.0) {
  if (!(delta_m > 0)) throw std::invalid_argument("bogoliubov_frame: delta_m must be positive");
  if (!(std::abs(g_cu) < delta_m))
    throw std::domain_error("bogoliubov_frame: |g_cu| >= delta_m (pump exceeds detuning)");
  FrameSpec f;
  f.Lambda = Lambda;
  f.delta0 = delta0;
  f.delta_m = delta_m;
  f.g_cu = g_cu;
  f.r = 0.5 * std::atanh(g_cu / delta_m);
  f.Lambda_eff = Lambda * std::exp(f.r) / 2.0;
  f.Delta_m = delta_m / std::cosh(2.0 * f.r);
  f.xi = f.Lambda_eff * f.Lambda_eff / f.Delta_m;
  f.tag = FrameTag::squeezed;
  return f;
}

/// Frame for a target squeezing parameter r (fixes g_cu = delta_m tanh 2r).
inline FrameSpec frame_for_r(double delta_m, double r, double Lambda, double delta0 = 0.0) {
  return bogoliubov_frame(delta_m, delta_m * std::tanh(2.0 * r), Lambda, delta0);
}

/// Cooperativity C = Lambda^2 / (kappa gamma).
inline double cooperativity(double Lambda, double kappa, double gamma) {
  if (!(kappa > 0) || !(gamma > 0))
    throw std::invalid_argument("cooperativity: rates must be positive");
  return Lambda * Lambda / (kappa * gamma);
}

/// Driven vs undriven cooperativity comparison. `ratio_exact` is the full
/// expression; `ratio_asymptotic` is the e^{2r} scaling commonly quoted for it.
struct EnhancementReport {
  double C_nd = 0.0;
  double C_d = 0.0;
  double ratio_exact = 0.0;       // (Lambda_eff/Lambda)^2 * kappa/kappa_au
  double ratio_asymptotic = 0.0;  // e^{2r}
};

inline EnhancementReport enhancement_report(const FrameSpec& f, double kappa, double kappa_au,
                                            double gamma) {
  EnhancementReport rep;
  rep.C_nd = cooperativity(f.Lambda, kappa, gamma);
  rep.C_d = cooperativity(f.Lambda_eff, kappa_au, gamma);
  rep.ratio_exact = rep.C_d / rep.C_nd;
  rep.ratio_asymptotic = std::exp(2.0 * f.r);
  return rep;
}

}  // namespace levspin::models
