#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "levspin/frames.hpp"
#include "levspin/operators.hpp"

// Hamiltonian builders. Composite layouts put spins first, Fock last:
// one NV  -> [spin:2, fock:N], two NVs -> [spin1:2, spin2:2, fock:N].
// In the squeezed frame the Bogoliubov mode is represented by the plain
// Fock ladder of that frame.

namespace levspin::models {

using qops::Matrix;
using qops::Operator;
using qops::SpaceLayout;

inline SpaceLayout one_nv_layout(int N) { return SpaceLayout{{"spin", 2}, {"fock", N}}; }
inline SpaceLayout two_nv_layout(int N) {
  return SpaceLayout{{"spin1", 2}, {"spin2", 2}, {"fock", N}};
}

namespace detail {

inline void check_truncation(int N) {
  if (N < 8) throw std::invalid_argument("hamiltonians: Fock truncation must be >= 8");
}

}  // namespace detail

/// Driven lab-frame model after the rotating-wave reduction:
/// (delta0/2) sz + delta_m a^dag a + Lambda (a s+ + a^dag s-) - (g_cu/2)(a^2 + a^dag^2).
inline Operator build_H_TO(const FrameSpec& f, int N) {
  detail::check_truncation(N);
  const SpaceLayout L = one_nv_layout(N);
  const auto s = qops::spin_half_paulis();
  const Operator a = qops::fock_annihilation(N);
  const Operator sz = embed(s.sz, L, "spin");
  const Operator sp = embed(s.sp, L, "spin");
  const Operator sm = embed(s.sm, L, "spin");
  const Operator af = embed(a, L, "fock");
  const Operator ad = af.adjoint();
  Operator H = (0.5 * f.delta0) * sz + f.delta_m * (ad * af) + f.Lambda * (af * sp + ad * sm) -
               (0.5 * f.g_cu) * (af * af + ad * ad);
  return Operator(L, H.mat(), true);
}

/// Squeezed-frame resonant part: (delta0/2) sz + Delta_m b^dag b + Lambda_eff (b + b^dag) sx.
inline Operator build_H_RO(const FrameSpec& f, int N) {
  detail::check_truncation(N);
  const SpaceLayout L = one_nv_layout(N);
  const auto s = qops::spin_half_paulis();
  const Operator b = embed(qops::fock_annihilation(N), L, "fock");
  const Operator bd = b.adjoint();
  Operator H = (0.5 * f.delta0) * embed(s.sz, L, "spin") + f.Delta_m * (bd * b) +
               f.Lambda_eff * ((b + bd) * embed(s.sx, L, "spin"));
  return Operator(L, H.mat(), true);
}

/// Counter-rotating remainder, suppressed as e^{-r}:
/// (Lambda e^{-r}/2) (b - b^dag)(s+ - s-).
inline Operator build_H_Sq(const FrameSpec& f, int N) {
  detail::check_truncation(N);
  const SpaceLayout L = one_nv_layout(N);
  const auto s = qops::spin_half_paulis();
  const Operator b = embed(qops::fock_annihilation(N), L, "fock");
  const Operator spm = embed(s.sp, L, "spin") - embed(s.sm, L, "spin");
  Operator H = (0.5 * f.Lambda * std::exp(-f.r)) * ((b - b.adjoint()) * spm);
  return Operator(L, H.mat(), true);
}

/// Scalar offset between the two frames:
/// squeeze-conjugated build_H_TO = build_H_RO + build_H_Sq + frame_constant * I.
inline double frame_constant(const FrameSpec& f) { return 0.5 * (f.Delta_m - f.delta_m); }

// ---------------------------------------------------------------------------
// time-dependent squeezed frame (ramped drive)
// ---------------------------------------------------------------------------

/// Squeezing schedule r(t) with a numeric central-difference derivative.
struct RampSchedule {
  std::function<double(double)> r_of_t;
  double dt = 1e-7;  // derivative step, in the working time unit

  double r(double t) const { return r_of_t(t); }
  double rdot(double t) const {
    const double tm = std::max(t - dt, 0.0);
    return (r_of_t(t + dt) - r_of_t(tm)) / (t + dt - tm);
  }
};

/// tanh ramp r(t) = r_max tanh(Lambda t / 2).
inline RampSchedule tanh_ramp(double r_max, double Lambda) {
  return RampSchedule{[r_max, Lambda](double t) { return r_max * std::tanh(Lambda * t / 2.0); },
                      1e-7 / std::max(Lambda, 1e-300)};
}

/// Time-dependent squeezed frame for a ramped drive g_cu(t) = delta_m tanh(2 r(t)).
/// Exposes the instantaneous coefficients and the three Hamiltonian pieces:
/// resonant H_RO(t), counter-rotating H_Sq(t), and the frame-velocity term
/// H_Err(t) = (rdot/2) * i (b^2 - b^dag^2).
struct RampedFrame {
  RampSchedule schedule;
  double delta_m = 0.0;
  double Lambda = 0.0;

  double Lambda_eff(double t) const { return Lambda * std::exp(schedule.r(t)) / 2.0; }
  double Delta_m(double t) const { return delta_m / std::cosh(2.0 * schedule.r(t)); }

  FrameSpec frame_at(double t) const {
    return frame_for_r(delta_m, schedule.r(t), Lambda, 0.0);
  }

  Operator H_RO(double t, int N) const { return build_H_RO(frame_at(t), N); }
  Operator H_Sq(double t, int N) const { return build_H_Sq(frame_at(t), N); }

  Operator H_Err(double t, int N) const {
    const SpaceLayout L = one_nv_layout(N);
    const Matrix a = qops::fock_annihilation_matrix(N);
    const Matrix gen = qops::Complex(0, 1) * (a * a - (a * a).adjoint().eval());
    Operator E(SpaceLayout{{"fock", N}}, gen, true);
    return (0.5 * schedule.rdot(t)) * embed(E, L, "fock");
  }
};

inline RampedFrame build_time_dependent_frame(RampSchedule schedule, double delta_m,
                                              double Lambda) {
  if (!(delta_m > 0))
    throw std::invalid_argument("build_time_dependent_frame: delta_m must be positive");
  return RampedFrame{std::move(schedule), delta_m, Lambda};
}

// ---------------------------------------------------------------------------
// two NVs
// ---------------------------------------------------------------------------

/// Difference coupling operator X = sx1 - sx2 on the two-NV layout.
inline Operator two_nv_difference(int N) {
  const SpaceLayout L = two_nv_layout(N);
  const auto s = qops::spin_half_paulis();
  Operator sx1 = embed(Operator(SpaceLayout{{"spin1", 2}}, s.sx.mat(), true), L, "spin1");
  Operator sx2 = embed(Operator(SpaceLayout{{"spin2", 2}}, s.sx.mat(), true), L, "spin2");
  return sx1 - sx2;
}

/// Squeezed-frame two-NV model:
/// (delta0/2)(sz1 + sz2) + Delta_m b^dag b + Lambda_eff (b + b^dag)(sx1 - sx2).
inline Operator build_two_nv(const FrameSpec& f, int N) {
  detail::check_truncation(N);
  const SpaceLayout L = two_nv_layout(N);
  const auto s = qops::spin_half_paulis();
  const Operator b = embed(qops::fock_annihilation(N), L, "fock");
  const Operator bd = b.adjoint();
  Operator sz1 = embed(Operator(SpaceLayout{{"spin1", 2}}, s.sz.mat(), true), L, "spin1");
  Operator sz2 = embed(Operator(SpaceLayout{{"spin2", 2}}, s.sz.mat(), true), L, "spin2");
  Operator H = (0.5 * f.delta0) * (sz1 + sz2) + f.Delta_m * (bd * b) +
               f.Lambda_eff * ((b + bd) * two_nv_difference(N));
  return Operator(L, H.mat(), true);
}

/// Lamb-Dicke expansion parameter eta = Lambda_eff / Delta_m of the
/// phonon-elimination transform. Soft validity bound at 0.3, hard at 1.
inline double sw_parameter(const FrameSpec& f) { return f.Lambda_eff / f.Delta_m; }

struct SwValidity {
  double eta = 0.0;
  bool warning = false;  // eta >= 0.3
};

inline SwValidity sw_check(const FrameSpec& f) {
  const double eta = sw_parameter(f);
  if (eta >= 1.0)
    throw std::domain_error("sw_effective: eta >= 1, phonon elimination invalid");
  return {eta, eta >= 0.3};
}

/// Polaron-transformed two-NV model at delta0 = 0:
/// e^S H e^{-S} with S = eta (b^dag - b)(sx1 - sx2) gives, exactly,
/// Delta_m b^dag b - xi (sx1 - sx2)^2 (up to a top-of-ladder truncation term).
inline Operator sw_effective(const FrameSpec& f, int N) {
  detail::check_truncation(N);
  sw_check(f);
  const SpaceLayout L = two_nv_layout(N);
  const Operator b = embed(qops::fock_annihilation(N), L, "fock");
  const Operator X = two_nv_difference(N);
  Operator H = f.Delta_m * (b.adjoint() * b) - f.xi * (X * X);
  return Operator(L, H.mat(), true);
}

/// Spin-only twisting interaction xi (sx1 - sx2)^2.
inline Operator ising(const FrameSpec& f) {
  const SpaceLayout L{{"spin1", 2}, {"spin2", 2}};
  const auto s = qops::spin_half_paulis();
  Operator sx1 = embed(Operator(SpaceLayout{{"spin1", 2}}, s.sx.mat(), true), L, "spin1");
  Operator sx2 = embed(Operator(SpaceLayout{{"spin2", 2}}, s.sx.mat(), true), L, "spin2");
  Operator X = sx1 - sx2;
  return Operator(L, (f.xi * (X * X)).mat(), true);
}

}  // namespace levspin::models
