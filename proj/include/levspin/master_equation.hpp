#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levspin/operators.hpp"

// Lindblad master-equation integration,
//   drho/dt = -i[H(t), rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2),
// with an embedded adaptive Dormand-Prince 5(4) stepper over dense density
// matrices. Operator applications go through a compressed-sparse form since
// every Hamiltonian and collapse operator here is banded in the Fock ladder.

namespace levspin::dynamics {

using qops::Complex;
using qops::DensityMatrix;
using qops::Matrix;
using qops::Operator;
using qops::SpaceLayout;

struct CollapseChannel {
  Operator op;
  double rate = 0.0;
  std::string label;

  CollapseChannel(Operator o, double r, std::string l = "") : op(std::move(o)), rate(r), label(std::move(l)) {
    if (rate < 0) throw std::invalid_argument("CollapseChannel: rate must be >= 0");
  }
};

namespace detail {

/// Sparse matrix stored by rows and by columns, for fast two-sided products.
class SparseOp {
 public:
  SparseOp() = default;
  explicit SparseOp(const Matrix& A) : n_(static_cast<int>(A.rows())) {
    rp_.assign(n_ + 1, 0);
    cp_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (A(i, j) != Complex(0, 0)) {
          ++rp_[i + 1];
          ++cp_[j + 1];
        }
    for (int i = 0; i < n_; ++i) rp_[i + 1] += rp_[i];
    for (int j = 0; j < n_; ++j) cp_[j + 1] += cp_[j];
    ri_.resize(rp_[n_]); rv_.resize(rp_[n_]);
    ci_.resize(cp_[n_]); cv_.resize(cp_[n_]);
    std::vector<int> rfill(rp_.begin(), rp_.end() - 1), cfill(cp_.begin(), cp_.end() - 1);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const Complex v = A(i, j);
        if (v != Complex(0, 0)) {
          ri_[rfill[i]] = j; rv_[rfill[i]++] = v;
          ci_[cfill[j]] = i; cv_[cfill[j]++] = v;
        }
      }
  }

  int dim() const { return n_; }
  int nnz() const { return static_cast<int>(rv_.size()); }

  /// out += c * A * X
  void add_left(Complex c, const Matrix& X, Matrix& out) const {
    for (int col = 0; col < n_; ++col) {
      const Complex* x = X.col(col).data();
      Complex* o = out.col(col).data();
      for (int i = 0; i < n_; ++i) {
        Complex acc(0, 0);
        for (int t = rp_[i]; t < rp_[i + 1]; ++t) acc += rv_[t] * x[ri_[t]];
        o[i] += c * acc;
      }
    }
  }

  /// out += c * X * A
  void add_right(Complex c, const Matrix& X, Matrix& out) const {
    for (int j = 0; j < n_; ++j) {
      auto ocol = out.col(j);
      for (int t = cp_[j]; t < cp_[j + 1]; ++t) ocol += (c * cv_[t]) * X.col(ci_[t]);
    }
  }

  /// out += c * X * A^dag
  void add_right_adjoint(Complex c, const Matrix& X, Matrix& out) const {
    for (int j = 0; j < n_; ++j) {
      auto ocol = out.col(j);
      for (int t = rp_[j]; t < rp_[j + 1]; ++t) ocol += (c * std::conj(rv_[t])) * X.col(ri_[t]);
    }
  }

 private:
  int n_ = 0;
  std::vector<int> rp_, ri_, cp_, ci_;
  std::vector<Complex> rv_, cv_;
};

}  // namespace detail

/// Hamiltonian as a static part plus real-coefficient time-dependent terms,
/// H(t) = H0 + sum_k c_k(t) H_k with every H_k hermitian.
class Hamiltonian {
 public:
  explicit Hamiltonian(const Operator& h0) : layout_(h0.layout()), static_dense_(h0.mat()) {
    check_hermitian(h0.mat());
  }
  explicit Hamiltonian(const SpaceLayout& layout)
      : layout_(layout), static_dense_(Matrix::Zero(layout.total_dim(), layout.total_dim())) {}

  void add_term(std::function<double(double)> coeff, const Operator& op) {
    if (op.layout() != layout_) throw std::invalid_argument("Hamiltonian: term layout mismatch");
    check_hermitian(op.mat());
    terms_.push_back({std::move(coeff), detail::SparseOp(op.mat()), op.mat()});
  }

  const SpaceLayout& layout() const { return layout_; }
  bool time_dependent() const { return !terms_.empty(); }

  Matrix at(double t) const {
    Matrix H = static_dense_;
    for (const auto& term : terms_) H += term.coeff(t) * term.dense;
    return H;
  }

 private:
  friend class MasterEquation;
  static void check_hermitian(const Matrix& m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("Hamiltonian: non-hermitian part");
  }
  struct Term {
    std::function<double(double)> coeff;
    detail::SparseOp sparse;
    Matrix dense;
  };
  SpaceLayout layout_;
  Matrix static_dense_;
  std::vector<Term> terms_;
};

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  bool renormalize = false;     // divide by the trace after each step (off by default)
  bool store_states = true;
  int eig_check_stride = 1;     // positivity check every k-th stored sample
  long max_steps = 200000000L;
};

/// Time-stamped master-equation solution with integrator metadata.
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;  // per grid point when store_states
  std::vector<std::string> observable_labels;
  std::vector<std::vector<Complex>> observables;  // [observable][grid point]

  double rtol = 0.0, atol = 0.0;
  int truncation = 0;
  std::string frame_tag;
  long n_steps = 0, n_rejected = 0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 1.0;
  bool flagged = false;
  std::vector<std::string> diagnostics;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

}  // namespace detail

/// Right-hand-side assembler for one Hamiltonian plus collapse channels.
class MasterEquation {
 public:
  MasterEquation(const Hamiltonian& h, const std::vector<CollapseChannel>& channels)
      : ham_(&h), dim_(h.layout().total_dim()) {
    Matrix K = Matrix::Zero(dim_, dim_);
    for (const auto& ch : channels) {
      if (ch.op.layout() != h.layout())
        throw std::invalid_argument("MasterEquation: channel layout mismatch");
      if (ch.rate == 0.0) continue;
      jumps_.push_back({detail::SparseOp(ch.op.mat()), ch.rate});
      K += 0.5 * ch.rate * (ch.op.mat().adjoint() * ch.op.mat());
    }
    h0_ = detail::SparseOp(ham_->static_dense_);
    damping_ = detail::SparseOp(K);
    scratch_.resize(dim_, dim_);
  }

  int dim() const { return dim_; }

  /// out = full Lindblad generator applied to rho at time t.
  void apply(double t, const Matrix& rho, Matrix& out) {
    out.setZero();
    const Complex mi(0, -1), pi_(0, 1);
    h0_.add_left(mi, rho, out);
    h0_.add_right(pi_, rho, out);
    for (const auto& term : ham_->terms_) {
      const double c = term.coeff(t);
      if (c == 0.0) continue;
      term.sparse.add_left(mi * c, rho, out);
      term.sparse.add_right(pi_ * c, rho, out);
    }
    damping_.add_left(Complex(-1, 0), rho, out);
    damping_.add_right(Complex(-1, 0), rho, out);
    for (const auto& j : jumps_) {
      scratch_.setZero();
      j.L.add_left(Complex(1, 0), rho, scratch_);           // L rho
      j.L.add_right_adjoint(Complex(j.rate, 0), scratch_, out);  // rate * (L rho) L^dag
    }
  }

 private:
  struct Jump {
    detail::SparseOp L;
    double rate;
  };
  const Hamiltonian* ham_;
  int dim_;
  detail::SparseOp h0_, damping_;
  std::vector<Jump> jumps_;
  Matrix scratch_;
};

/// Integrate the master equation across t_grid, recording the state and the
/// expectation of each observable at every grid point. The trace is conserved
/// by construction (each stage is an exact generator application); positivity
/// is monitored and violations below -1e-6 flag the run instead of aborting.
inline Trajectory evolve_master(const DensityMatrix& rho0, const Hamiltonian& H,
                                const std::vector<CollapseChannel>& channels,
                                const std::vector<double>& t_grid,
                                const IntegratorOptions& opts = {},
                                const std::vector<std::pair<std::string, Operator>>& observables = {}) {
  if (t_grid.size() < 2) throw std::invalid_argument("evolve_master: need at least two grid times");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("evolve_master: times must be strictly increasing");
  if (rho0.layout() != H.layout())
    throw std::invalid_argument("evolve_master: state/Hamiltonian layout mismatch");

  MasterEquation eq(H, channels);
  const int dim = eq.dim();
  using D = detail::Dopri5;

  Trajectory out;
  out.rtol = opts.rtol;
  out.atol = opts.atol;
  out.truncation = dim;

  Matrix y = rho0.mat();
  Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), k5(dim, dim), k6(dim, dim),
      k7(dim, dim), ytmp(dim, dim), y5(dim, dim), err(dim, dim);

  auto record = [&](double t, const Matrix& rho) {
    out.times.push_back(t);
    DensityMatrix dm(rho0.layout(), rho);
    out.max_trace_drift = std::max(out.max_trace_drift, dm.trace_error());
    const size_t idx = out.times.size() - 1;
    if (idx % static_cast<size_t>(std::max(1, opts.eig_check_stride)) == 0) {
      const double mineig = dm.min_eigenvalue();
      out.min_eigenvalue = std::min(out.min_eigenvalue, mineig);
      if (mineig < -1e-6 && !out.flagged) {
        out.flagged = true;
        out.diagnostics.push_back("positivity violation: min eigenvalue " + std::to_string(mineig) +
                                  " at t = " + std::to_string(t));
      }
    }
    for (size_t io = 0; io < observables.size(); ++io)
      out.observables[io].push_back((observables[io].second.mat() * rho).trace());
    if (opts.store_states) out.states.push_back(std::move(dm));
  };

  out.observable_labels.reserve(observables.size());
  out.observables.resize(observables.size());
  for (const auto& [label, op] : observables) {
    if (op.layout() != H.layout())
      throw std::invalid_argument("evolve_master: observable layout mismatch");
    out.observable_labels.push_back(label);
  }

  record(t_grid[0], y);

  double t = t_grid[0];
  double h = (t_grid[1] - t_grid[0]) / 100.0;
  eq.apply(t, y, k1);

  auto error_norm = [&](const Matrix& e, const Matrix& y0, const Matrix& y1) {
    double acc = 0.0;
    const Complex* pe = e.data();
    const Complex* p0 = y0.data();
    const Complex* p1 = y1.data();
    const int n = dim * dim;
    for (int i = 0; i < n; ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(p0[i]), std::abs(p1[i]));
      const double q = std::abs(pe[i]) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / n);
  };

  for (size_t seg = 1; seg < t_grid.size(); ++seg) {
    const double t_end = t_grid[seg];
    while (t < t_end) {
      if (out.n_steps + out.n_rejected > opts.max_steps)
        throw std::runtime_error("evolve_master: step budget exhausted");
      const double hs = std::min(h, t_end - t);
      const bool clipped = hs < h;
      if (hs < 1e-14 * std::max({1.0, std::abs(t), std::abs(h)}) && !clipped)
        throw std::runtime_error("evolve_master: step size underflow");

      ytmp = y + hs * (D::a21 * k1);
      eq.apply(t + D::c2 * hs, ytmp, k2);
      ytmp = y + hs * (D::a31 * k1 + D::a32 * k2);
      eq.apply(t + D::c3 * hs, ytmp, k3);
      ytmp = y + hs * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3);
      eq.apply(t + D::c4 * hs, ytmp, k4);
      ytmp = y + hs * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4);
      eq.apply(t + D::c5 * hs, ytmp, k5);
      ytmp = y + hs * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5);
      eq.apply(t + hs, ytmp, k6);
      y5 = y + hs * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
      eq.apply(t + hs, y5, k7);
      err = hs * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);

      const double norm = error_norm(err, y, y5);
      if (norm <= 1.0) {
        t = clipped ? t_end : t + hs;
        y = y5;
        y = 0.5 * (y + y.adjoint().eval());  // project out hermiticity roundoff
        if (opts.renormalize) y /= y.trace().real();
        k1 = k7;  // FSAL; hermitization above is far below the error tolerance
        ++out.n_steps;
      } else {
        ++out.n_rejected;
      }
      const double factor =
          norm > 0 ? std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0) : 5.0;
      // keep the controller's step of a clipped-and-accepted segment ending
      if (!clipped || norm > 1.0) h = hs * factor;
    }
    record(t, y);
  }
  return out;
}

/// Convenience wrapper for a static Hamiltonian operator.
inline Trajectory evolve_master(const DensityMatrix& rho0, const Operator& H,
                                const std::vector<CollapseChannel>& channels,
                                const std::vector<double>& t_grid,
                                const IntegratorOptions& opts = {},
                                const std::vector<std::pair<std::string, Operator>>& observables = {}) {
  return evolve_master(rho0, Hamiltonian(H), channels, t_grid, opts, observables);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace levspin::dynamics
