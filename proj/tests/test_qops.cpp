#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>

#include "levspin/constants.hpp"
#include "levspin/operators.hpp"

using namespace levspin;
using namespace levspin::qops;
using Catch::Approx;

namespace {

Matrix random_hermitian(int n) {
  Matrix m = Matrix::Random(n, n);
  return 0.5 * (m + m.adjoint().eval());
}

}  // namespace

TEST_CASE("fock ladder basics") {
  CHECK_THROWS(fock_annihilation(1));

  const auto a2 = fock_annihilation(2);
  Matrix expect(2, 2);
  expect << 0, 1, 0, 0;
  CHECK((a2.mat() - expect).cwiseAbs().maxCoeff() == 0.0);

  // truncated commutator: [a, a^dag] = I - N |N-1><N-1|
  const int N = 9;
  const auto a = fock_annihilation(N);
  Matrix comm = a.mat() * a.mat().adjoint() - a.mat().adjoint() * a.mat();
  Matrix expect2 = Matrix::Identity(N, N);
  expect2(N - 1, N - 1) -= N;
  CHECK((comm - expect2).cwiseAbs().maxCoeff() < 1e-12);

  // number operator spectrum 0..N-1
  const auto n = fock_number(N);
  for (int k = 0; k < N; ++k) CHECK(std::real(n.mat()(k, k)) == Approx(double(k)));
}

TEST_CASE("coherent state expectation of the ladder operator") {
  const int N = 40;
  const Complex alpha(1.0, 0.0);
  const auto D = displacement(alpha, N);
  const Vector psi = D.mat() * fock_state(N, 0);
  const auto a = fock_annihilation(N);
  const Complex got = psi.adjoint() * a.mat() * psi;
  CHECK(std::abs(got - alpha) < 1e-8);
}

TEST_CASE("spin operator algebra") {
  const auto S = spin1_operators();
  const Matrix comm = S.Sx.mat() * S.Sy.mat() - S.Sy.mat() * S.Sx.mat();
  CHECK((comm - Complex(0, 1) * S.Sz.mat()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> es(S.Sz.mat());
  CHECK(es.eigenvalues()(0) == Approx(-1.0));
  CHECK(es.eigenvalues()(1) == Approx(0.0).margin(1e-14));
  CHECK(es.eigenvalues()(2) == Approx(1.0));

  const auto s = spin_half_paulis();
  const Matrix anti = s.sp.mat() * s.sm.mat() + s.sm.mat() * s.sp.mat();
  CHECK((anti - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((s.sx.mat() - (s.sp.mat() + s.sm.mat())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed pads with identities") {
  const auto s = spin_half_paulis();
  const SpaceLayout L{{"spin", 2}, {"fock", 3}};
  const auto emb = embed(s.sz, L, "spin");
  const auto direct = kron(s.sz, identity(SpaceLayout{{"fock", 3}}));
  CHECK((emb.mat() - direct.mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(emb.hermitian_flag().value());
  CHECK_THROWS(embed(s.sz, L, "nope"));

  std::srand(7);
  Operator A(SpaceLayout{{"u", 2}}, random_hermitian(2), true);
  Operator B(SpaceLayout{{"v", 3}}, random_hermitian(3), true);
  const SpaceLayout L2{{"u", 2}, {"v", 3}};
  const auto lhs = embed(A, L2, "u") * embed(B, L2, "v");
  const auto rhs = kron(A, B);
  CHECK((lhs.mat() - rhs.mat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rhs.hermitian_flag().value());
}

TEST_CASE("matrix exponential") {
  const auto s = spin_half_paulis();
  const SpaceLayout L{{"spin", 2}};

  const auto zero = Operator(L, Matrix::Zero(2, 2), true);
  CHECK((expm(zero).mat() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  // exp(i pi sx / 2) = i sx
  const auto U = expm(s.sx, Complex(0, constants::pi / 2));
  CHECK((U.mat() - Complex(0, 1) * s.sx.mat()).cwiseAbs().maxCoeff() < 1e-13);

  // general (non-normal) matrices: exp(A) exp(-A) = I
  std::srand(11);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix A = Matrix::Random(12, 12);
    A *= 5.0 / A.cwiseAbs().rowwise().sum().maxCoeff();
    const SpaceLayout L12{{"x", 12}};
    const Matrix P = expm(Operator(L12, A)).mat() * expm(Operator(L12, A), Complex(-1, 0)).mat();
    CHECK((P - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
  }

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS(expm(Operator(L, bad)));
}

TEST_CASE("displacement and squeeze operators") {
  const int N = 24;
  CHECK((displacement(Complex(0, 0), N).mat() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((squeeze(0.0, N).mat() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-14);

  // displacement covariance <0| D^dag a D |0> = alpha
  const Complex alpha(0.4, -0.3);
  const auto D = displacement(alpha, 64);
  const auto a = fock_annihilation(64);
  const Vector v = D.mat() * fock_state(64, 0);
  CHECK(std::abs(Complex(v.adjoint() * a.mat() * v) - alpha) < 1e-10);

  CHECK_THROWS_AS(displacement(Complex(4.0, 0), 24), TruncationError);
  CHECK_THROWS_AS(squeeze(3.0, 24), TruncationError);
}

TEST_CASE("squeeze convention: S^dag a S = a cosh r - a^dag sinh r") {
  // the conjugated ladder matches the closed form on low Fock levels once the
  // working truncation leaves room for the squeezed support ~ e^{2r} n
  const int N = 500, block = 30;
  const double r = 1.0;
  const auto S = squeeze(r, N);
  const auto a = fock_annihilation(N);
  const Matrix lhs = S.mat().adjoint() * a.mat() * S.mat();
  const Matrix rhs = std::cosh(r) * a.mat() - std::sinh(r) * a.mat().adjoint();
  CHECK((lhs - rhs).block(0, 0, block, block).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("partial trace and fidelity") {
  const int N = 12;
  const SpaceLayout L{{"spin", 2}, {"fock", N}};

  // product state: tracing out the other factor returns each piece
  Vector spin(2);
  spin << std::sqrt(0.3), std::sqrt(0.7);
  const Vector ph = coherent_state(N, Complex(0.8, 0.2));
  Vector psi(2 * N);
  for (int s = 0; s < 2; ++s)
    for (int n = 0; n < N; ++n) psi(s * N + n) = spin(s) * ph(n);
  const auto rho = DensityMatrix::pure(L, psi);

  const auto rsp = partial_trace(rho, "spin");
  const auto rph = partial_trace(rho, "fock");
  CHECK((rsp.mat() - (spin * spin.adjoint())).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((rph.mat() - (ph * ph.adjoint())).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(rsp.mat().trace() - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(rph.mat().trace() - Complex(1, 0)) < 1e-12);

  CHECK(state_fidelity(rho, psi) == Approx(1.0).epsilon(1e-12));

  // coherent-vacuum overlap e^{-|alpha|^2}
  const auto vac = DensityMatrix::pure(SpaceLayout{{"fock", 40}}, fock_state(40, 0));
  CHECK(state_fidelity(vac, coherent_state(40, Complex(1, 0))) ==
        Approx(std::exp(-1.0)).epsilon(1e-6));

  // hermitian expectation has negligible imaginary part
  const auto num = fock_number(N);
  const Complex e = expectation(rph, Operator(SpaceLayout{{"fock", N}}, num.mat(), true));
  CHECK(std::abs(e.imag()) < 1e-10);

  CHECK_THROWS(partial_trace(rho, "nope"));
}

TEST_CASE("density matrix validation") {
  const SpaceLayout L{{"spin", 2}};
  Matrix ok(2, 2);
  ok << 0.5, 0, 0, 0.5;
  CHECK_NOTHROW(DensityMatrix(L, ok).validate());

  Matrix neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  CHECK_THROWS(DensityMatrix(L, neg).validate());

  Matrix tr(2, 2);
  tr << 0.7, 0, 0, 0.7;
  CHECK_THROWS(DensityMatrix(L, tr).validate());
}

TEST_CASE("layout rejects duplicate labels and zero dims") {
  CHECK_THROWS(SpaceLayout({{"a", 2}, {"a", 3}}));
  CHECK_THROWS(SpaceLayout({{"a", 0}}));
}
