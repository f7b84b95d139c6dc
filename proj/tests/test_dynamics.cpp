#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "levspin/gate.hpp"
#include "levspin/hamiltonians.hpp"
#include "levspin/master_equation.hpp"
#include "levspin/observables.hpp"
#include "levspin/phase_space.hpp"

using namespace levspin;
using namespace levspin::models;
using namespace levspin::dynamics;
using namespace levspin::qops;
using Catch::Approx;

namespace {

DensityMatrix spin_fock_pure(int N, const Vector& spin, const Vector& ph) {
  Vector psi(2 * N);
  for (int s = 0; s < 2; ++s)
    for (int n = 0; n < N; ++n) psi(s * N + n) = spin(s) * ph(n);
  return DensityMatrix::pure(one_nv_layout(N), psi);
}

}  // namespace

TEST_CASE("dephasing channel decays coherence as exp(-2 gamma t)") {
  const SpaceLayout L{{"spin", 2}};
  const auto s = spin_half_paulis();
  Matrix r0(2, 2);
  r0 << 0.5, 0.5, 0.5, 0.5;
  const DensityMatrix rho0(L, r0);
  const double gamma = 1.0;
  const auto H = Operator(L, Matrix::Zero(2, 2), true);
  const auto traj = evolve_master(rho0, H, {{s.sz, gamma, "dephasing"}},
                                  linspace(0.0, 0.5, 6));
  const double ratio = std::abs(traj.states.back().mat()(0, 1)) / 0.5;
  CHECK(ratio == Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(traj.max_trace_drift < 1e-12);
}

TEST_CASE("damping channel relaxes the excitation as exp(-kappa t)") {
  const int N = 6;
  const SpaceLayout L{{"fock", N}};
  const auto b = fock_annihilation(N);
  const DensityMatrix rho0 = DensityMatrix::pure(L, fock_state(N, 1));
  const auto H = Operator(L, Matrix::Zero(N, N), true);
  const auto nOp = Operator(L, (b.adjoint() * b).mat(), true);
  const auto traj = evolve_master(rho0, H, {{b, 1.0, "damping"}}, linspace(0.0, 1.0, 5), {},
                                  {{"n", nOp}});
  CHECK(std::real(traj.observables[0].back()) == Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(traj.min_eigenvalue > -1e-10);
}

TEST_CASE("open exchange dynamics matches an independent integrator") {
  // frozen reference solution of the damped-and-dephased exchange model
  const int N = 8;
  FrameSpec f;
  f.delta0 = 0.9;
  f.delta_m = 1.1;
  f.Lambda = 0.6;
  const auto H = build_H_TO(f, N);
  const SpaceLayout L = one_nv_layout(N);
  const auto s = spin_half_paulis();
  const auto b = embed(fock_annihilation(N), L, "fock");
  const auto szf = embed(s.sz, L, "spin");

  const auto rho0 = spin_fock_pure(N, (Vector(2) << 1, 0).finished(), fock_state(N, 0));
  Matrix pe = Matrix::Zero(2 * N, 2 * N);
  pe.block(0, 0, N, N) = Matrix::Identity(N, N);
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 3.5, 5.0};
  const auto traj =
      evolve_master(rho0, H, {{b, 0.13, "damping"}, {szf, 0.07, "dephasing"}}, grid,
                    IntegratorOptions{1e-10, 1e-12, false, true, 1, 200000000L},
                    {{"P_e", Operator(L, pe, true)}});

  const double expect_pe[] = {1.0, 0.915611408032, 0.701852358783, 0.224525232182,
                              0.237093209756, 0.604084874625};
  for (size_t k = 0; k < grid.size(); ++k)
    CHECK(std::real(traj.observables[0][k]) == Approx(expect_pe[k]).margin(2e-8));
  CHECK(traj.max_trace_drift < 1e-10);
  CHECK(traj.min_eigenvalue > -1e-8);
}

TEST_CASE("closed-system master equation agrees with the unitary propagator") {
  std::srand(23);
  const int N = 8;
  FrameSpec f;
  f.delta0 = 0.4;
  f.delta_m = 1.0;
  f.Lambda = 0.5;
  f.g_cu = 0.3;
  f.r = 0.2;  // arbitrary; H_TO only reads the lab parameters
  const auto H = build_H_TO(f, N);

  Vector psi0 = Vector::Random(2 * N);
  psi0.normalize();
  const auto rho0 = DensityMatrix::pure(one_nv_layout(N), psi0);
  const double T = 3.0;
  const auto traj = evolve_master(rho0, H, {}, {0.0, T});
  const Matrix U = expm(H, Complex(0, -T)).mat();
  const Vector target = U * psi0;
  CHECK(state_fidelity(traj.states.back(), target) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("conditional-displacement solution of the resonant squeezed model") {
  // closed system: integrated state equals the analytic construction
  //   e^{-i Delta_m t n} D[alpha(t) sx] e^{i Phi(t) sx^2} |0, up>
  const int N = 40;
  const auto f = frame_for_r(1.0, 0.0, 0.7);  // Lambda_eff = 0.35, Delta_m = 1
  const auto H = build_H_RO(f, N);
  const SpaceLayout L = one_nv_layout(N);
  const auto rho0 = spin_fock_pure(N, (Vector(2) << 1, 0).finished(), fock_state(N, 0));

  const double period = 2.0 * constants::pi / f.Delta_m;
  for (int k : {1, 3, 8, 16}) {
    const double t = k * period / 8.0;
    const auto traj = evolve_master(rho0, H, {}, {0.0, t}, IntegratorOptions{1e-10, 1e-12});

    const Complex alpha = displacement_at(f, t);
    const double eta = f.Lambda_eff / f.Delta_m;
    const double Phi = eta * eta * (f.Delta_m * t - std::sin(f.Delta_m * t));
    const auto s = spin_half_paulis();
    const Matrix Pp = 0.5 * (Matrix::Identity(2, 2) + s.sx.mat());
    const Matrix Pm = 0.5 * (Matrix::Identity(2, 2) - s.sx.mat());
    const Matrix Dp = displacement(alpha, N).mat();
    const Matrix Dm = displacement(-alpha, N).mat();
    Matrix Dfull = Matrix::Zero(2 * N, 2 * N);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        Dfull.block(i * N, j * N, N, N) = Pp(i, j) * Dp + Pm(i, j) * Dm;
    // free-frame rotation e^{-i Delta_m t n}; the sx^2 phase is global here
    Matrix rot = Matrix::Zero(2 * N, 2 * N);
    for (int s2 = 0; s2 < 2; ++s2)
      for (int n = 0; n < N; ++n)
        rot(s2 * N + n, s2 * N + n) = std::exp(Complex(0, -f.Delta_m * t * n));
    Vector psi0(2 * N);
    psi0.setZero();
    psi0(0) = 1.0;  // |e> x |0>
    const Vector target = std::exp(Complex(0, Phi)) * (rot * (Dfull * psi0));
    CHECK(state_fidelity(traj.states.back(), target) == Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("spin purity returns at full phonon loops") {
  const int N = 40;
  const auto f = frame_for_r(1.0, 0.5, 0.7);
  const auto H = build_H_RO(f, N);
  const auto rho0 = spin_fock_pure(N, (Vector(2) << 1, 0).finished(), fock_state(N, 0));
  const double period = 2.0 * constants::pi / f.Delta_m;
  const auto traj = evolve_master(rho0, H, {}, {0.0, 0.37 * period, period, 2.0 * period},
                                  IntegratorOptions{1e-10, 1e-12});
  auto purity = [](const DensityMatrix& r) {
    return std::real((r.mat() * r.mat()).trace());
  };
  const auto mid = partial_trace(traj.states[1], "spin");
  CHECK(purity(mid) < 0.999);  // entangled away from loop closure
  const auto one = partial_trace(traj.states[2], "spin");
  CHECK(purity(one) == Approx(1.0).epsilon(1e-6));
  const auto two = partial_trace(traj.states[3], "spin");
  CHECK(purity(two) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("time-dependent Hamiltonian term plumbing") {
  // pi pulse assembled from a shaped coefficient
  const SpaceLayout L{{"spin", 2}};
  const auto s = spin_half_paulis();
  Hamiltonian H(L);
  const double T = 2.0;
  H.add_term([T](double t) { return std::sin(constants::pi * t / T); }, s.sx);
  Matrix r0(2, 2);
  r0 << 1, 0, 0, 0;
  const auto traj = evolve_master(DensityMatrix(L, r0), H, {}, linspace(0.0, T, 5),
                                  IntegratorOptions{1e-10, 1e-12});
  // independent fine-step reference using the same H(t)
  Matrix U = Matrix::Identity(2, 2);
  const int steps = 20000;
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) * T / steps;
    U = (expm(Operator(L, H.at(t)), Complex(0, -T / steps)).mat() * U).eval();
  }
  const Matrix ref = U * r0 * U.adjoint();
  CHECK((traj.states.back().mat() - ref).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("trajectory guards") {
  const SpaceLayout L{{"spin", 2}};
  Matrix r0(2, 2);
  r0 << 1, 0, 0, 0;
  const auto H = Operator(L, Matrix::Zero(2, 2), true);
  CHECK_THROWS(evolve_master(DensityMatrix(L, r0), H, {}, {0.0}));
  CHECK_THROWS(evolve_master(DensityMatrix(L, r0), H, {}, {0.0, 0.0}));
  const auto s = spin_half_paulis();
  CHECK_THROWS(CollapseChannel(s.sz, -1.0));
}

TEST_CASE("wigner function") {
  const int N = 30;
  const SpaceLayout L{{"fock", N}};

  SECTION("vacuum peak value") {
    const auto vac = DensityMatrix::pure(L, fock_state(N, 0));
    const auto grid = symmetric_grid(3.0, 61);
    const auto w = wigner(vac, grid, grid);
    CHECK(w.w[30][30] == Approx(2.0 / constants::pi).epsilon(1e-6));
    CHECK(w.integral() == Approx(1.0).epsilon(1e-2));
  }

  SECTION("coherent state peaks at its amplitude") {
    const Complex a0(1.2, -0.7);
    const auto rho = DensityMatrix::pure(L, coherent_state(N, a0));
    const auto gx = symmetric_grid(3.0, 81), gy = symmetric_grid(3.0, 81);
    const auto w = wigner(rho, gx, gy);
    double best = -1;
    double bx = 0, by = 0;
    for (size_t i = 0; i < gx.size(); ++i)
      for (size_t j = 0; j < gy.size(); ++j)
        if (w.w[i][j] > best) {
          best = w.w[i][j];
          bx = gx[i];
          by = gy[j];
        }
    CHECK(bx == Approx(a0.real()).margin(0.08));
    CHECK(by == Approx(a0.imag()).margin(0.08));
    CHECK(best == Approx(2.0 / constants::pi).epsilon(2e-3));
  }

  SECTION("grid beyond the truncation-safe region is rejected") {
    const auto vac = DensityMatrix::pure(L, fock_state(N, 0));
    const auto far = symmetric_grid(20.0, 5);
    CHECK_THROWS_AS(wigner(vac, far, far), TruncationError);
  }

  SECTION("even cat shows alternating interference fringes") {
    const double a0 = 2.0;
    Vector cat = coherent_state(N, a0) + coherent_state(N, -a0);
    cat.normalize();
    const auto rho = DensityMatrix::pure(L, cat);
    // along the imaginary axis the parity oscillates
    const auto gx = std::vector<double>{0.0};
    const auto gy = symmetric_grid(1.2, 121);
    const auto w = wigner(rho, gx, gy);
    CHECK(w.w[0][60] > 0.0);  // positive centre
    int sign_changes = 0;
    for (size_t j = 1; j < gy.size(); ++j)
      if (w.w[0][j] * w.w[0][j - 1] < 0) ++sign_changes;
    CHECK(sign_changes >= 4);
  }
}

TEST_CASE("cat target fidelity") {
  const int N = 30;
  const Complex alpha(1.3, 0.4);
  const auto target = cat_target(alpha, N);
  const auto rho = DensityMatrix::pure(one_nv_layout(N), target);
  CHECK(cat_fidelity(rho, alpha) == Approx(1.0).epsilon(1e-12));

  // zero-size cat is the bare ground state |0>|down>
  Vector down(2);
  down << 0, 1;
  Vector psi(2 * N);
  psi.setZero();
  psi(N) = 1.0;  // |down>|0>
  const auto rho0 = DensityMatrix::pure(one_nv_layout(N), psi);
  CHECK(cat_fidelity(rho0, Complex(0, 0)) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cooperativity") {
  CHECK(models::cooperativity(1.0, 1.0, 1.0) == 1.0);
  CHECK_THROWS(models::cooperativity(1.0, 0.0, 1.0));
}

TEST_CASE("loop gate phases and state fidelity") {
  // closed system, one loop at Delta_m = 4 Lambda_eff: aligned x-inputs return
  // exactly; anti-aligned inputs pick up a pi/2 magnitude phase whose sign
  // follows the loop orientation (the analytic unitary uses the opposite
  // convention; state fidelities cannot see the difference)
  const double r = 1.0;
  const double delta_m = 4.0 * (std::exp(r) / 2.0) * std::cosh(2.0 * r);
  const auto f = frame_for_r(delta_m, r, 1.0);
  REQUIRE(f.Delta_m == Approx(4.0 * f.Lambda_eff).epsilon(1e-12));

  const int N = 16;
  const qops::SpaceLayout L = models::two_nv_layout(N);
  const auto H = models::build_two_nv(f, N);
  const double tau = gate_time(f);

  // read the relative phase from the coherence of a |++> and |+-> superposition
  const Vector spin_pp = two_qubit_x_state(true, true);
  const Vector spin_pm = two_qubit_x_state(true, false);
  Vector psi0 = Vector::Zero(4 * N);
  for (int q = 0; q < 4; ++q) psi0(q * N) = (spin_pp(q) + spin_pm(q)) / std::sqrt(2.0);
  const auto traj = evolve_master(DensityMatrix::pure(L, psi0), H, {}, {0.0, tau},
                                  IntegratorOptions{1e-11, 1e-13});
  Vector ref_pp = Vector::Zero(4 * N), ref_pm = Vector::Zero(4 * N);
  for (int q = 0; q < 4; ++q) {
    ref_pp(q * N) = spin_pp(q);
    ref_pm(q * N) = spin_pm(q);
  }
  const auto& rhoT = traj.states.back().mat();
  const Complex coh = ref_pp.adjoint() * rhoT * ref_pm;  // 0.5 e^{i(phi_pp - phi_pm)}
  const double rel_phase = std::arg(coh);
  CHECK(std::abs(std::abs(rel_phase) - constants::pi / 2.0) < 1e-5);

  // basis rows return to themselves up to phase
  for (const auto& in : {std::pair{true, true}, {true, false}}) {
    const Vector spin = two_qubit_x_state(in.first, in.second);
    Vector p0 = Vector::Zero(4 * N);
    for (int q = 0; q < 4; ++q) p0(q * N) = spin(q);
    const auto t2 = evolve_master(DensityMatrix::pure(L, p0), H, {}, {0.0, tau},
                                  IntegratorOptions{1e-11, 1e-13});
    CHECK(state_fidelity(t2.states.back(), p0) == Approx(1.0).epsilon(1e-6));
  }

  // the analytic unitary realizes the committed convention on the same rows
  const auto U = gate_unitary(f);
  const Complex amp_pm = spin_pm.adjoint() * U.mat() * spin_pm;
  CHECK(std::arg(amp_pm) == Approx(-constants::pi / 2.0).epsilon(1e-9));
  const Complex amp_pp = spin_pp.adjoint() * U.mat() * spin_pp;
  CHECK(std::abs(amp_pp - Complex(1, 0)) < 1e-9);
}

TEST_CASE("positivity diagnostics and optional renormalization") {
  const SpaceLayout L{{"spin", 2}};
  const auto s = spin_half_paulis();
  const auto H = Operator(L, Matrix::Zero(2, 2), true);

  // a slightly non-positive input stays non-positive under dephasing and
  // must flag the run with diagnostics instead of aborting
  Matrix bad(2, 2);
  bad << 1.01, 0, 0, -0.01;
  const auto traj = evolve_master(DensityMatrix(L, bad), H, {{s.sz, 0.5, "deph"}},
                                  linspace(0.0, 1.0, 5));
  CHECK(traj.flagged);
  REQUIRE_FALSE(traj.diagnostics.empty());
  CHECK(traj.diagnostics.front().find("positivity") != std::string::npos);
  CHECK(traj.min_eigenvalue < -1e-6);

  // renormalization divides out an off-unit trace each step
  Matrix off(2, 2);
  off << 1.2, 0, 0, 0.6;
  IntegratorOptions opts;
  opts.renormalize = true;
  const auto traj2 = evolve_master(DensityMatrix(L, off), H, {{s.sz, 0.5, "deph"}},
                                   linspace(0.0, 1.0, 5), opts);
  CHECK(std::abs(traj2.states.back().mat().trace() - Complex(1, 0)) < 1e-12);
}
