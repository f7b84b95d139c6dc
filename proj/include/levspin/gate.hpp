#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "levspin/hamiltonians.hpp"
#include "levspin/master_equation.hpp"

// Two-qubit geometric phase gate driven by one closed loop of the phonon.

namespace levspin::dynamics {

using models::FrameSpec;
using qops::Operator;
using qops::SpaceLayout;
using qops::Vector;

/// Gate duration: one phonon loop, tau = 2 pi / Delta_m.
inline double gate_time(const FrameSpec& f) {
  if (!(f.Delta_m > 0)) throw std::invalid_argument("gate_time: Delta_m must be positive");
  return 2.0 * constants::pi / f.Delta_m;
}

/// Analytic loop unitary on the two spins,
/// U = exp(-i 2pi (Lambda_eff/Delta_m)^2 sum_ij eta_ij sx_i sx_j), eta_ii = 1, eta_ij = -1.
inline Operator gate_unitary(const FrameSpec& f) {
  const SpaceLayout L{{"spin1", 2}, {"spin2", 2}};
  const auto s = qops::spin_half_paulis();
  Operator sx1 = embed(Operator(SpaceLayout{{"spin1", 2}}, s.sx.mat(), true), L, "spin1");
  Operator sx2 = embed(Operator(SpaceLayout{{"spin2", 2}}, s.sx.mat(), true), L, "spin2");
  Operator gen = sx1 * sx1 + sx2 * sx2 - sx1 * sx2 - sx2 * sx1;
  const double eta = f.Lambda_eff / f.Delta_m;
  const double phase = 2.0 * constants::pi * eta * eta;
  return qops::expm(Operator(L, gen.mat(), true), qops::Complex(0, -phase));
}

/// sigma_x product eigenstates on one qubit: |+x> = (|e>+|+>)/sqrt2, |-x> likewise.
inline Vector x_state(bool plus) {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), (plus ? 1.0 : -1.0) / std::sqrt(2.0);
  return v;
}

inline Vector two_qubit_x_state(bool plus1, bool plus2) {
  const Vector a = x_state(plus1), b = x_state(plus2);
  Vector v(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(2 * i + j) = a(i) * b(j);
  return v;
}

struct GateRun {
  Trajectory trajectory;
  double gate_fidelity = 0.0;  // against (analytic unitary x phonon vacuum) target
  double gate_time = 0.0;
  double phonon_fidelity_max_time = 0.0;  // argmax_t of the phonon vacuum fidelity, t > 0
};

/// Integrate the two-NV master equation over one gate period from a pure
/// spin state (x) phonon vacuum, and report the fidelity against the
/// analytic-unitary target.
inline GateRun run_gate(const Vector& spin_state, const FrameSpec& f,
                        const std::vector<CollapseChannel>& channels, int N,
                        const IntegratorOptions& opts = {}, int n_samples = 81) {
  if (spin_state.size() != 4) throw std::invalid_argument("run_gate: need a two-qubit spin state");
  const SpaceLayout L = models::two_nv_layout(N);
  const Vector vac = qops::fock_state(N, 0);

  Vector psi0(4 * N);
  psi0.setZero();
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < N; ++n) psi0(s * N + n) = spin_state(s) * vac(n);

  GateRun out;
  out.gate_time = gate_time(f);

  const Operator H = models::build_two_nv(f, N);
  const auto rho0 = qops::DensityMatrix::pure(L, psi0);
  auto grid = linspace(0.0, out.gate_time, n_samples);
  out.trajectory = evolve_master(rho0, H, channels, grid, opts);

  const Operator U = gate_unitary(f);
  Vector target(4 * N);
  target.setZero();
  const Vector spin_out = U.mat() * spin_state;
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < N; ++n) target(s * N + n) = spin_out(s) * vac(n);
  out.gate_fidelity = qops::state_fidelity(out.trajectory.states.back(), target);

  // phonon return: fidelity of the reduced phonon state against vacuum
  double best = -1.0;
  for (size_t k = 1; k < out.trajectory.states.size(); ++k) {
    const auto ph = qops::partial_trace(out.trajectory.states[k], "fock");
    const double fvac = std::real(ph.mat()(0, 0));
    if (fvac > best) {
      best = fvac;
      out.phonon_fidelity_max_time = out.trajectory.times[k];
    }
  }
  return out;
}

}  // namespace levspin::dynamics
