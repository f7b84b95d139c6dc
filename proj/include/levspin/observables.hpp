#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "levspin/constants.hpp"
#include "levspin/operators.hpp"
#include "levspin/table.hpp"

// State observables: displaced-parity Wigner function and fidelity against
// the entangled-cat target.

namespace levspin::dynamics {

using qops::Complex;
using qops::DensityMatrix;
using qops::Matrix;
using qops::Vector;

namespace detail {

/// Fock matrix elements <m|D(beta)|n> via the column recurrence
/// D|n> = (a^dag - beta*) D|n-1> / sqrt(n).
inline Matrix displacement_matrix(Complex beta, int N) {
  Matrix T = Matrix::Zero(N, N);
  T(0, 0) = std::exp(-0.5 * std::norm(beta));
  for (int m = 1; m < N; ++m) T(m, 0) = T(m - 1, 0) * beta / std::sqrt(double(m));
  for (int n = 1; n < N; ++n) {
    const double inv = 1.0 / std::sqrt(double(n));
    T(0, n) = -std::conj(beta) * T(0, n - 1) * inv;
    for (int m = 1; m < N; ++m)
      T(m, n) = (std::sqrt(double(m)) * T(m - 1, n - 1) - std::conj(beta) * T(m, n - 1)) * inv;
  }
  return T;
}

}  // namespace detail

struct WignerField {
  std::vector<double> re_beta;  // grid along the real axis
  std::vector<double> im_beta;  // grid along the imaginary axis
  std::vector<std::vector<double>> w;  // w[i][j] at (re_beta[i], im_beta[j])

  /// Riemann-sum integral over the grid.
  double integral() const {
    if (re_beta.size() < 2 || im_beta.size() < 2) return 0.0;
    const double dx = re_beta[1] - re_beta[0];
    const double dy = im_beta[1] - im_beta[0];
    double s = 0.0;
    for (const auto& row : w)
      for (double v : row) s += v;
    return s * dx * dy;
  }
};

/// Displaced-parity Wigner function W(beta) = (2/pi) Tr[rho D(2beta) Pi],
/// normalized so the vacuum peaks at 2/pi.
inline WignerField wigner(const DensityMatrix& rho_phonon, const std::vector<double>& re_grid,
                          const std::vector<double>& im_grid) {
  if (rho_phonon.layout().n_factors() != 1)
    throw std::invalid_argument("wigner: expected a phonon-only state");
  const int N = rho_phonon.dim();
  double beta2_max = 0.0;
  for (double x : re_grid)
    for (double y : im_grid) beta2_max = std::max(beta2_max, x * x + y * y);
  if (4.0 * beta2_max > 8.0 * N)
    throw qops::TruncationError("wigner: grid exceeds the truncation-safe region");
  WignerField f;
  f.re_beta = re_grid;
  f.im_beta = im_grid;
  f.w.assign(re_grid.size(), std::vector<double>(im_grid.size(), 0.0));
  const Matrix& rho = rho_phonon.mat();
  for (size_t i = 0; i < re_grid.size(); ++i) {
    for (size_t j = 0; j < im_grid.size(); ++j) {
      const Complex beta(re_grid[i], im_grid[j]);
      const Matrix T = detail::displacement_matrix(2.0 * beta, N);
      Complex acc = 0.0;
      for (int m = 0; m < N; ++m) {
        const double par = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = 0; n < N; ++n) acc += rho(m, n) * T(n, m) * par;
      }
      f.w[i][j] = (2.0 / constants::pi) * std::real(acc);
    }
  }
  return f;
}

inline std::vector<double> symmetric_grid(double half_width, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? 0.0 : -half_width + 2.0 * half_width * i / (n - 1);
  return g;
}

/// Entangled-cat target (|alpha>|+x> - |-alpha>|-x>)/norm on [spin, fock].
inline Vector cat_target(Complex alpha_t, int N) {
  const Vector plus_x = (Vector(2) << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)).finished();
  const Vector minus_x = (Vector(2) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)).finished();
  const Vector cp = qops::coherent_state(N, alpha_t);
  const Vector cm = qops::coherent_state(N, -alpha_t);
  Vector psi(2 * N);
  for (int s = 0; s < 2; ++s)
    for (int n = 0; n < N; ++n) psi(s * N + n) = (plus_x(s) * cp(n) - minus_x(s) * cm(n));
  psi.normalize();  // spin parts are orthogonal, so the coherent overlap drops out
  return psi;
}

/// Fidelity of a composite [spin, fock] state against the cat target.
inline double cat_fidelity(const DensityMatrix& rho, Complex alpha_t) {
  if (rho.layout().n_factors() != 2)
    throw std::invalid_argument("cat_fidelity: expected a [spin, fock] state");
  const int N = rho.layout().factor(1).dim;
  return qops::state_fidelity(rho, cat_target(alpha_t, N));
}

}  // namespace levspin::dynamics
