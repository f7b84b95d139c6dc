#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "levspin/frames.hpp"
#include "levspin/hamiltonians.hpp"

// Phase-space trajectories of the conditional displacement and the geometric
// phase they enclose.

namespace levspin::dynamics {

using models::FrameSpec;
using models::RampSchedule;
using std::complex;

struct PhaseSpacePath {
  std::vector<double> times;
  std::vector<complex<double>> alpha;      // squeezed-frame displacement
  std::vector<complex<double>> lab_alpha;  // interaction-picture displacement of the bare mode
  std::vector<double> phase;               // accumulated geometric phase, phase[0] = 0
};

/// Closed-form displacement for a static squeezing parameter:
/// alpha(t) = (Lambda_eff/Delta_m)(1 - e^{i Delta_m t}), plus the bare-mode
/// variant alpha_I(t) = Lambda/(2 Delta_m)[(cos Delta_m t - 1) e^{2r} - i sin Delta_m t].
inline complex<double> displacement_at(const FrameSpec& f, double t) {
  if (f.Delta_m == 0.0) throw std::domain_error("displacement_path: resonant drive (Delta_m = 0)");
  return f.Lambda_eff / f.Delta_m * (1.0 - std::exp(complex<double>(0, f.Delta_m * t)));
}

inline complex<double> lab_displacement_at(const FrameSpec& f, double t) {
  if (f.Delta_m == 0.0) throw std::domain_error("displacement_path: resonant drive (Delta_m = 0)");
  return f.Lambda / (2.0 * f.Delta_m) *
         complex<double>((std::cos(f.Delta_m * t) - 1.0) * std::exp(2.0 * f.r),
                         -std::sin(f.Delta_m * t));
}

/// Trapezoidal accumulation of Phi = Im int alpha* d(alpha) along a sampled path.
inline std::vector<double> accumulate_phase(const std::vector<complex<double>>& alpha) {
  std::vector<double> phi(alpha.size(), 0.0);
  for (size_t k = 1; k < alpha.size(); ++k) {
    const complex<double> mid = 0.5 * (alpha[k] + alpha[k - 1]);
    phi[k] = phi[k - 1] + std::imag(std::conj(mid) * (alpha[k] - alpha[k - 1]));
  }
  return phi;
}

inline PhaseSpacePath displacement_path(const FrameSpec& f, const std::vector<double>& t_grid) {
  PhaseSpacePath p;
  p.times = t_grid;
  p.alpha.reserve(t_grid.size());
  p.lab_alpha.reserve(t_grid.size());
  for (double t : t_grid) {
    p.alpha.push_back(displacement_at(f, t));
    p.lab_alpha.push_back(lab_displacement_at(f, t));
  }
  p.phase = accumulate_phase(p.alpha);
  return p;
}

/// Total geometric phase of a sampled path.
inline double geometric_phase(const PhaseSpacePath& p) {
  return p.phase.empty() ? 0.0 : p.phase.back();
}

/// Geometric phase of alpha(t) over [t0, t1], refined by interval doubling
/// with Richardson extrapolation until successive estimates move < tol.
inline double geometric_phase_adaptive(const std::function<complex<double>(double)>& alpha_of_t,
                                       double t0, double t1, double tol = 1e-9) {
  auto eval = [&](int n) {
    double phi = 0.0;
    complex<double> prev = alpha_of_t(t0);
    for (int k = 1; k <= n; ++k) {
      const complex<double> cur = alpha_of_t(t0 + (t1 - t0) * k / n);
      phi += std::imag(std::conj(0.5 * (cur + prev)) * (cur - prev));
      prev = cur;
    }
    return phi;
  };
  int n = 64;
  double coarse = eval(n);
  for (; n <= (1 << 22); n *= 2) {
    const double fine = eval(2 * n);
    const double extrap = (4.0 * fine - coarse) / 3.0;
    if (std::abs(fine - coarse) < tol * std::max(1.0, std::abs(extrap))) return extrap;
    coarse = fine;
  }
  throw std::runtime_error("geometric_phase_adaptive: no convergence");
}

/// Displacement of the ramped-drive protocol,
///   alpha(t) = -i (Lambda/2) int_0^t exp[r(s) - i chi(t,s)] ds,
///   chi(t,s) = int_s^t Delta_m(u) du,
/// computed as cumulative trapezoid sums over refined sub-panels of t_grid,
/// doubling the refinement until alpha stabilizes to rel_tol.
inline PhaseSpacePath cat_displacement(const RampSchedule& schedule, double delta_m, double Lambda,
                                       const std::vector<double>& t_grid, double rel_tol = 1e-8) {
  if (t_grid.empty()) throw std::invalid_argument("cat_displacement: empty time grid");
  auto Dm = [&](double t) { return delta_m / std::cosh(2.0 * schedule.r(t)); };
  auto Leff = [&](double t) { return Lambda * std::exp(schedule.r(t)) / 2.0; };

  std::vector<complex<double>> prev;
  for (int panels = 16; panels <= (1 << 20); panels *= 2) {
    std::vector<complex<double>> alpha;
    alpha.reserve(t_grid.size());
    double X = 0.0;                 // running int_0^t Delta_m
    complex<double> B = 0.0;        // running int_0^t Lambda_eff e^{+iX}
    double t_prev = t_grid[0];
    if (t_grid[0] != 0.0) {
      // integrate silently from 0 to the first requested time
      const int m = panels;
      double ti = 0.0;
      for (int k = 0; k < m; ++k) {
        const double tj = t_grid[0] * (k + 1) / m;
        const double dm_mid = 0.5 * (Dm(ti) + Dm(tj));
        const double Xj = X + dm_mid * (tj - ti);
        const complex<double> fi = Leff(ti) * std::exp(complex<double>(0, X));
        const complex<double> fj = Leff(tj) * std::exp(complex<double>(0, Xj));
        B += 0.5 * (fi + fj) * (tj - ti);
        X = Xj;
        ti = tj;
      }
    }
    alpha.push_back(complex<double>(0, -1) * std::exp(complex<double>(0, -X)) * B);
    for (size_t seg = 1; seg < t_grid.size(); ++seg) {
      const int m = panels;
      double ti = t_prev;
      (void)ti;
      double ta = t_grid[seg - 1];
      for (int k = 0; k < m; ++k) {
        const double tb = t_grid[seg - 1] + (t_grid[seg] - t_grid[seg - 1]) * (k + 1) / m;
        const double dm_mid = 0.5 * (Dm(ta) + Dm(tb));
        const double Xb = X + dm_mid * (tb - ta);
        const complex<double> fa = Leff(ta) * std::exp(complex<double>(0, X));
        const complex<double> fb = Leff(tb) * std::exp(complex<double>(0, Xb));
        B += 0.5 * (fa + fb) * (tb - ta);
        X = Xb;
        ta = tb;
      }
      alpha.push_back(complex<double>(0, -1) * std::exp(complex<double>(0, -X)) * B);
      t_prev = t_grid[seg];
    }
    if (!prev.empty()) {
      double scale = 0.0, diff = 0.0;
      for (size_t i = 0; i < alpha.size(); ++i) {
        scale = std::max(scale, std::abs(alpha[i]));
        diff = std::max(diff, std::abs(alpha[i] - prev[i]));
      }
      if (diff <= rel_tol * std::max(scale, 1e-30)) {
        PhaseSpacePath p;
        p.times = t_grid;
        p.alpha = std::move(alpha);
        p.phase = accumulate_phase(p.alpha);
        return p;
      }
    }
    prev = std::move(alpha);
  }
  throw std::runtime_error("cat_displacement: quadrature did not converge");
}

}  // namespace levspin::dynamics
