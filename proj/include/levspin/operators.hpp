#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "levspin/layout.hpp"

// Dense complex operator algebra over truncated Fock (x) spin spaces.

namespace levspin::qops {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Operator {
 public:
  Operator() = default;
  Operator(SpaceLayout layout, Matrix m, std::optional<bool> hermitian = std::nullopt)
      : layout_(std::move(layout)), m_(std::move(m)), hermitian_(hermitian) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("Operator: matrix must be square");
    if (m_.rows() != layout_.total_dim())
      throw std::invalid_argument("Operator: matrix size does not match layout");
    if (hermitian_ && *hermitian_ && !is_hermitian(1e-12))
      throw std::invalid_argument("Operator: hermitian flag set but matrix is not hermitian");
  }

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& mat() const { return m_; }
  Matrix& mat() { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  std::optional<bool> hermitian_flag() const { return hermitian_; }

  bool is_hermitian(double tol = 1e-12) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m_.cwiseAbs().maxCoeff());
  }

  Operator adjoint() const { return Operator(layout_, m_.adjoint(), hermitian_); }

  friend Operator operator+(const Operator& a, const Operator& b) {
    require_same(a, b);
    std::optional<bool> h;
    if (a.hermitian_ && b.hermitian_) h = *a.hermitian_ && *b.hermitian_;
    return Operator(a.layout_, a.m_ + b.m_, h);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    require_same(a, b);
    std::optional<bool> h;
    if (a.hermitian_ && b.hermitian_) h = *a.hermitian_ && *b.hermitian_;
    return Operator(a.layout_, a.m_ - b.m_, h);
  }
  friend Operator operator*(const Operator& a, const Operator& b) {
    require_same(a, b);
    return Operator(a.layout_, a.m_ * b.m_);
  }
  friend Operator operator*(Complex c, const Operator& a) {
    std::optional<bool> h;
    if (a.hermitian_ && *a.hermitian_ && c.imag() == 0.0) h = true;
    return Operator(a.layout_, c * a.m_, h);
  }
  friend Operator operator*(double c, const Operator& a) { return Complex(c, 0.0) * a; }

 private:
  static void require_same(const Operator& a, const Operator& b) {
    if (a.layout_ != b.layout_) throw std::invalid_argument("Operator: layout mismatch");
  }
  SpaceLayout layout_;
  Matrix m_;
  std::optional<bool> hermitian_;
};

// ---------------------------------------------------------------------------
// elementary constructors
// ---------------------------------------------------------------------------

inline Matrix fock_annihilation_matrix(int N) {
  if (N < 2) throw std::invalid_argument("fock_annihilation: truncation must be >= 2");
  Matrix a = Matrix::Zero(N, N);
  for (int m = 0; m + 1 < N; ++m) a(m, m + 1) = std::sqrt(double(m + 1));
  return a;
}

inline Operator fock_annihilation(int N, const std::string& label = "fock") {
  return Operator(SpaceLayout{{label, N}}, fock_annihilation_matrix(N));
}

inline Operator fock_number(int N, const std::string& label = "fock") {
  Matrix n = Matrix::Zero(N, N);
  for (int m = 0; m < N; ++m) n(m, m) = double(m);
  return Operator(SpaceLayout{{label, N}}, n, true);
}

inline Operator identity(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()), true);
}

struct Spin1Ops {
  Operator Sx, Sy, Sz;
};

/// Spin-1 operators in the |+1, 0, -1> ordering.
inline Spin1Ops spin1_operators(const std::string& label = "spin1") {
  SpaceLayout l{{label, 3}};
  const double s = 1.0 / std::sqrt(2.0);
  Matrix sx(3, 3), sy(3, 3), sz(3, 3);
  sx << 0, s, 0, s, 0, s, 0, s, 0;
  sy << 0, Complex(0, -s), 0, Complex(0, s), 0, Complex(0, -s), 0, Complex(0, s), 0;
  sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return {Operator(l, sx, true), Operator(l, sy, true), Operator(l, sz, true)};
}

struct SpinHalfOps {
  Operator sx, sy, sz, sp, sm;
};

/// Pauli set in the effective two-level basis, ordered |e>, |+>.
/// sigma_z = |e><e| - |+><+|, sigma_+ = |e><+|.
inline SpinHalfOps spin_half_paulis(const std::string& label = "spin") {
  SpaceLayout l{{label, 2}};
  Matrix sx(2, 2), sy(2, 2), sz(2, 2), sp(2, 2), sm(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  sp << 0, 1, 0, 0;
  sm << 0, 0, 1, 0;
  return {Operator(l, sx, true), Operator(l, sy, true), Operator(l, sz, true), Operator(l, sp),
          Operator(l, sm)};
}

// ---------------------------------------------------------------------------
// composition
// ---------------------------------------------------------------------------

inline Operator kron(const Operator& a, const Operator& b) {
  std::vector<Factor> fs = a.layout().factors();
  for (const auto& f : b.layout().factors()) fs.push_back(f);
  SpaceLayout l(std::move(fs));
  Matrix m(l.total_dim(), l.total_dim());
  const int db = b.dim();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      m.block(i * db, j * db, db, db) = a.mat()(i, j) * b.mat();
  std::optional<bool> h;
  if (a.hermitian_flag() && b.hermitian_flag()) h = *a.hermitian_flag() && *b.hermitian_flag();
  return Operator(l, std::move(m), h);
}

inline Operator kron(const std::vector<Operator>& ops) {
  if (ops.empty()) throw std::invalid_argument("kron: empty operator list");
  Operator out = ops[0];
  for (size_t i = 1; i < ops.size(); ++i) out = kron(out, ops[i]);
  return out;
}

/// Pad a single-factor operator with identities so it acts on `layout`.
inline Operator embed(const Operator& op, const SpaceLayout& layout, const std::string& label) {
  const size_t k = layout.index_of(label);
  if (op.layout().n_factors() != 1 || op.dim() != layout.factor(k).dim)
    throw std::invalid_argument("embed: operator does not match factor '" + label + "'");
  std::vector<Operator> parts;
  for (size_t i = 0; i < layout.n_factors(); ++i) {
    if (i == k)
      parts.push_back(Operator(SpaceLayout{{layout.factor(i).label, layout.factor(i).dim}},
                               op.mat(), op.hermitian_flag()));
    else
      parts.push_back(identity(SpaceLayout{{layout.factor(i).label, layout.factor(i).dim}}));
  }
  return kron(parts);
}

// ---------------------------------------------------------------------------
// exponentials
// ---------------------------------------------------------------------------

namespace detail {

/// Pade 13 scaling-and-squaring exponential for general matrices.
inline Matrix expm_pade(const Matrix& A) {
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  const int n = static_cast<int>(A.rows());
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  const double theta13 = 5.371920351148152;
  if (nrm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    scale = std::pow(2.0, -squarings);
  }
  Matrix As = scale * A;
  Matrix A2 = As * As, A4 = A2 * A2, A6 = A4 * A2;
  Matrix I = Matrix::Identity(n, n);
  Matrix U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                   b[3] * A2 + b[1] * I);
  Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
             b[0] * I;
  Matrix F = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) F = F * F;
  return F;
}

/// exp(scale * H) for hermitian H via eigendecomposition.
inline Matrix expm_hermitian(const Matrix& H, Complex scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  const auto& w = es.eigenvalues();
  Vector ph(w.size());
  for (int i = 0; i < w.size(); ++i) ph(i) = std::exp(scale * w(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Matrix exponential of scale * op. Hermitian and anti-hermitian inputs use
/// the eigendecomposition route (unitary to machine precision); everything
/// else falls back to scaling-and-squaring.
inline Operator expm(const Operator& op, Complex scale = Complex(1.0, 0.0)) {
  if (!op.mat().allFinite()) throw std::invalid_argument("expm: non-finite entries");
  if (op.is_hermitian(1e-13))
    return Operator(op.layout(), detail::expm_hermitian(op.mat(), scale));
  Matrix antih = Complex(0, 1) * op.mat();  // hermitian iff op is anti-hermitian
  if ((antih - antih.adjoint()).cwiseAbs().maxCoeff() <=
      1e-13 * std::max(1.0, antih.cwiseAbs().maxCoeff()))
    return Operator(op.layout(), detail::expm_hermitian(antih, Complex(0, -1) * scale));
  return Operator(op.layout(), detail::expm_pade(scale * op.mat()));
}

/// D(alpha) = exp(alpha a^dag - alpha* a) on a truncated Fock space.
inline Operator displacement(Complex alpha, int N, const std::string& label = "fock") {
  if (std::norm(alpha) > N / 4.0)
    throw TruncationError("displacement: |alpha|^2 exceeds N/4 truncation guard");
  Matrix a = fock_annihilation_matrix(N);
  Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return expm(Operator(SpaceLayout{{label, N}}, std::move(gen)));
}

/// S(r) = exp(r (a^2 - a^dag^2) / 2); S^dag a S = a cosh r - a^dag sinh r.
inline Operator squeeze(double r, int N, const std::string& label = "fock") {
  if (std::abs(r) > 0.5 * std::log(double(N)))
    throw TruncationError("squeeze: |r| exceeds ln(N)/2 truncation guard");
  Matrix a = fock_annihilation_matrix(N);
  Matrix gen = 0.5 * r * (a * a - (a * a).adjoint());
  return expm(Operator(SpaceLayout{{label, N}}, std::move(gen)));
}

// ---------------------------------------------------------------------------
// states and density matrices
// ---------------------------------------------------------------------------

inline Vector fock_state(int N, int n) {
  if (n < 0 || n >= N) throw std::invalid_argument("fock_state: level outside truncation");
  Vector v = Vector::Zero(N);
  v(n) = 1.0;
  return v;
}

/// Truncated coherent state, renormalized after the cut.
inline Vector coherent_state(int N, Complex alpha) {
  Vector v(N);
  v(0) = 1.0;
  for (int n = 1; n < N; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
  v.normalize();
  return v;
}

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(SpaceLayout layout, Matrix rho) : layout_(std::move(layout)), rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() != layout_.total_dim())
      throw std::invalid_argument("DensityMatrix: shape does not match layout");
  }

  static DensityMatrix pure(const SpaceLayout& layout, const Vector& psi) {
    if (psi.size() != layout.total_dim())
      throw std::invalid_argument("DensityMatrix::pure: state size mismatch");
    return DensityMatrix(layout, psi * psi.adjoint());
  }

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& mat() const { return rho_; }
  Matrix& mat() { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  double trace_error() const { return std::abs(rho_.trace() - Complex(1.0, 0.0)); }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Throws when the state violates hermiticity (1e-10), unit trace (1e-10)
  /// or positivity (eigenvalues below -1e-8).
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10, double eig_tol = -1e-8) const {
    if (hermiticity_error() > herm_tol) throw std::runtime_error("DensityMatrix: not hermitian");
    if (trace_error() > trace_tol) throw std::runtime_error("DensityMatrix: trace != 1");
    if (min_eigenvalue() < eig_tol) throw std::runtime_error("DensityMatrix: negative eigenvalue");
  }

 private:
  SpaceLayout layout_;
  Matrix rho_;
};

/// Trace out every factor except `keep`.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::string& keep) {
  const auto& L = rho.layout();
  const size_t k = L.index_of(keep);
  const int dk = L.factor(k).dim;
  const int sk = L.stride(k);
  const int D = L.total_dim();
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < D; ++i) {
    const int ik = (i / sk) % dk;
    const int irest = i - ik * sk;
    for (int jk = 0; jk < dk; ++jk) {
      const int j = irest + jk * sk;
      out(ik, jk) += rho.mat()(i, j);
    }
  }
  return DensityMatrix(SpaceLayout{{keep, dk}}, std::move(out));
}

inline Complex expectation(const DensityMatrix& rho, const Operator& op) {
  if (rho.layout() != op.layout()) throw std::invalid_argument("expectation: layout mismatch");
  return (op.mat() * rho.mat()).trace();
}

/// <psi| rho |psi> for a pure target.
inline double state_fidelity(const DensityMatrix& rho, const Vector& psi) {
  if (psi.size() != rho.dim()) throw std::invalid_argument("state_fidelity: size mismatch");
  return std::real(Complex(psi.adjoint() * rho.mat() * psi));
}

}  // namespace levspin::qops
