#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "levspin/frames.hpp"
#include "levspin/hamiltonians.hpp"
#include "levspin/master_equation.hpp"

using namespace levspin;
using namespace levspin::models;
using namespace levspin::qops;
using Catch::Approx;

TEST_CASE("NV mixed basis") {
  const double D = 2 * constants::pi * 2.87e9;

  SECTION("no transverse field") {
    const auto b = nv_mixed_basis(D, 0.0);
    CHECK(b.theta == 0.0);
    CHECK(b.omega_g == Approx(0.0).margin(1e-6));
    CHECK(b.omega_e == Approx(D));
    CHECK(b.omega_d == Approx(D));
  }

  SECTION("2 delta / D = 1") {
    const auto b = nv_mixed_basis(D, D / 2.0);
    CHECK(b.theta == Approx(constants::pi / 8.0).epsilon(1e-14));
    CHECK(b.omega_e == Approx(D * (1.0 + std::numbers::sqrt2) / 2.0).epsilon(1e-14));
    CHECK(b.omega_g == Approx(D * (1.0 - std::numbers::sqrt2) / 2.0).epsilon(1e-14));
  }

  SECTION("mixing relation") {
    const double delta = 0.17 * D;
    const auto b = nv_mixed_basis(D, delta);
    CHECK(std::tan(2.0 * b.theta) == Approx(2.0 * delta / D).epsilon(1e-12));
  }

  SECTION("eigendecomposition oracle") {
    const auto S = spin1_operators();
    for (double ratio : {0.01, 0.1, 0.3}) {
      const double delta = ratio * D;
      const auto b = nv_mixed_basis(D, delta);
      const Matrix H = D * (S.Sz.mat() * S.Sz.mat()) + delta * S.Sx.mat();
      Eigen::SelfAdjointEigenSolver<Matrix> es(H);
      // sorted ascending: omega_g < omega_d < omega_e for delta > 0
      CHECK(es.eigenvalues()(0) == Approx(b.omega_g).epsilon(1e-10).margin(1e-10 * D));
      CHECK(es.eigenvalues()(1) == Approx(b.omega_d).epsilon(1e-10));
      CHECK(es.eigenvalues()(2) == Approx(b.omega_e).epsilon(1e-10));
      // stated mixed states are the eigenvectors
      const Eigen::Vector3cd He = H * b.e_state;
      CHECK((He - b.omega_e * b.e_state).cwiseAbs().maxCoeff() < 1e-10 * D);
      const Eigen::Vector3cd Hg = H * b.g_state;
      CHECK((Hg - b.omega_g * b.g_state).cwiseAbs().maxCoeff() < 1e-10 * D);
      // orthonormal
      CHECK(std::abs(b.e_state.dot(b.g_state)) < 1e-12);
      CHECK(std::abs(b.e_state.norm() - 1.0) < 1e-12);
      CHECK(std::abs(b.d_state.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("dressed basis") {
  CHECK_THROWS(dressed_basis(0.0, 0.0));

  const auto d0 = dressed_basis(0.0, 2.0);
  CHECK(d0.alpha == Approx(constants::pi / 4.0));
  CHECK(d0.omega_plus == Approx(1.0));

  const auto d1 = dressed_basis(3.0, 0.0);
  CHECK(d1.alpha == 0.0);

  // numeric 2x2 check at (Delta, Omega') = (1, 2)
  const auto d = dressed_basis(1.0, 2.0);
  Matrix H(2, 2);  // ordered (|g>, |d>)
  H << -0.5, Complex(0, 1.0), Complex(0, -1.0), 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  CHECK(es.eigenvalues()(0) == Approx(d.omega_minus).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == Approx(d.omega_plus).epsilon(1e-12));
  // stated eigenvector |+> = i sin(alpha)|g> + cos(alpha)|d>
  Eigen::Vector2cd plus(Complex(0, std::sin(d.alpha)), std::cos(d.alpha));
  CHECK(((H * plus) - d.omega_plus * plus).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("effective coupling") {
  CHECK(effective_coupling(2.5, 0.0, 0.0) == 2.5);
  CHECK(effective_coupling(2.5, 0.0, constants::pi / 2) == Approx(0.0).margin(1e-12));

  const double lambda = 1.0;
  const double D = constants::nv_zero_field_splitting;
  const double B0 = 10e-3, alpha = 0.3;
  const double expected =
      std::cos(0.5 * std::atan(2.0 * constants::gamma_e * B0 / D)) * std::cos(alpha);
  CHECK(coupling_at(lambda, B0, alpha) == Approx(expected).epsilon(1e-12));

  // coupling shrinks as the transverse field and the dressing angle grow
  CHECK(coupling_at(lambda, 20e-3, alpha) < coupling_at(lambda, 10e-3, alpha));
  CHECK(coupling_at(lambda, B0, 0.5) < coupling_at(lambda, B0, 0.3));
}

TEST_CASE("bogoliubov frame parameters") {
  SECTION("no drive") {
    const auto f = bogoliubov_frame(3.0, 0.0, 1.0);
    CHECK(f.r == 0.0);
    CHECK(f.Lambda_eff == Approx(0.5));
    CHECK(f.Delta_m == Approx(3.0));
  }

  SECTION("inverse relation") {
    const auto f = bogoliubov_frame(1.0, std::tanh(6.0), 1.0);
    CHECK(f.r == Approx(3.0).epsilon(1e-12));
  }

  SECTION("invariants") {
    const auto f = bogoliubov_frame(2.0, 1.3, 0.7, 0.1);
    CHECK(std::tanh(2.0 * f.r) == Approx(f.g_cu / f.delta_m).epsilon(1e-12));
    CHECK(f.Lambda_eff == Approx(f.Lambda * std::exp(f.r) / 2.0).epsilon(1e-14));
    CHECK(f.Delta_m == Approx(f.delta_m / std::cosh(2.0 * f.r)).epsilon(1e-14));
    CHECK(f.xi == Approx(f.Lambda_eff * f.Lambda_eff / f.Delta_m).epsilon(1e-14));
  }

  SECTION("instability") {
    CHECK_THROWS_AS(bogoliubov_frame(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bogoliubov_frame(1.0, 1.5, 1.0), std::domain_error);
  }

  SECTION("enhancement monotone in r, cooperativity ratios") {
    double prev = 0.0;
    for (double r = 0.0; r <= 3.0; r += 0.25) {
      const auto f = frame_for_r(1.0, r, 1.0);
      CHECK(f.Lambda_eff / f.Lambda > prev);
      prev = f.Lambda_eff / f.Lambda;
    }
    const auto f = frame_for_r(1.0, 3.0, 1.0);
    const auto rep = enhancement_report(f, 0.01, 0.01, 0.01);
    CHECK(rep.ratio_exact == Approx(std::exp(6.0) / 4.0).epsilon(1e-10));
    CHECK(rep.ratio_asymptotic == Approx(std::exp(6.0)).epsilon(1e-10));
    CHECK(rep.ratio_exact == Approx(100.86).epsilon(1e-3));
  }
}

TEST_CASE("driven-model Hamiltonian spectra") {
  const int N = 16;

  SECTION("decoupled spectrum") {
    FrameSpec f;
    f.delta0 = 0.8;
    f.delta_m = 1.7;
    const auto H = build_H_TO(f, N);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat());
    std::vector<double> expect;
    for (int n = 0; n < N; ++n) {
      expect.push_back(-0.4 + 1.7 * n);
      expect.push_back(0.4 + 1.7 * n);
    }
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 2 * N; ++i) CHECK(es.eigenvalues()(i) == Approx(expect[i]).epsilon(1e-12));
  }

  SECTION("exchange ladder for g_cu = 0") {
    FrameSpec f;
    f.delta0 = 0.9;
    f.delta_m = 1.3;
    f.Lambda = 0.21;
    const auto H = build_H_TO(f, N);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat());
    std::vector<double> expect;
    expect.push_back(-f.delta0 / 2.0);  // uncoupled bottom state |0,+>
    for (int n = 0; n <= 5; ++n) {
      const double centre = f.delta_m * (n + 0.5);
      const double split =
          0.5 * std::sqrt(std::pow(f.delta0 - f.delta_m, 2) + 4.0 * f.Lambda * f.Lambda * (n + 1));
      expect.push_back(centre - split);
      expect.push_back(centre + split);
    }
    std::sort(expect.begin(), expect.end());
    for (size_t i = 0; i < expect.size(); ++i)
      CHECK(es.eigenvalues()(i) == Approx(expect[i]).epsilon(1e-10));
  }

  SECTION("hermiticity") {
    const auto f = bogoliubov_frame(2.0, 1.2, 0.45, 0.3);
    CHECK(build_H_TO(f, N).is_hermitian(1e-14));
    CHECK(build_H_RO(f, N).is_hermitian(1e-14));
    CHECK(build_H_Sq(f, N).is_hermitian(1e-14));
  }
}

TEST_CASE("squeeze conjugation maps the driven model onto the squeezed frame") {
  // truncation-safe block: the squeezed support of level n spans ~ e^{2r} n
  const int N = 420, block = 24;
  const double delta_m = 3.0, Lambda = 0.45, delta0 = 0.7, r = 1.0;
  const auto f = bogoliubov_frame(delta_m, delta_m * std::tanh(2.0 * r), Lambda, delta0);
  REQUIRE(f.r == Approx(r).epsilon(1e-12));

  const auto HT = build_H_TO(f, N);
  const auto HRO = build_H_RO(f, N);
  const auto HSq = build_H_Sq(f, N);
  const SpaceLayout L = one_nv_layout(N);
  const auto S = embed(squeeze(r, N), L, "fock");

  // the squeezed-frame matrices arise from conjugation by the inverse squeeze
  const Matrix conj = S.mat() * HT.mat() * S.mat().adjoint();
  const Matrix target = HRO.mat() + HSq.mat() +
                        frame_constant(f) * Matrix::Identity(2 * N, 2 * N);
  double err = 0.0;
  for (int si = 0; si < 2; ++si)
    for (int sj = 0; sj < 2; ++sj)
      err = std::max(err, (conj - target)
                              .block(si * N, sj * N, block, block)
                              .cwiseAbs()
                              .maxCoeff());
  CHECK(err < 1e-9);
}

TEST_CASE("bogoliubov ladder diagonalizes the quadratic part exactly") {
  // finite-truncation identity: delta_m n - (g/2)(a^2 + a^dag^2)
  //   = Delta_m b^dag b + const + corner artifact at the top level
  const int N = 60;
  const double r = 1.5, delta_m = 2.0;
  const auto f = bogoliubov_frame(delta_m, delta_m * std::tanh(2.0 * r), 0.0, 0.0);
  const Matrix a = fock_annihilation_matrix(N);
  const Matrix Q = delta_m * (a.adjoint() * a).eval() -
                   0.5 * f.g_cu * (a * a + (a * a).adjoint().eval());
  const Matrix b = std::cosh(r) * a - std::sinh(r) * a.adjoint();
  const double sh = std::sinh(r);
  Matrix R = Q - f.Delta_m * (b.adjoint() * b).eval() +
             f.Delta_m * sh * sh * Matrix::Identity(N, N);
  R(N - 1, N - 1) -= f.Delta_m * sh * sh * double(N);  // top-of-ladder artifact
  CHECK(R.cwiseAbs().maxCoeff() < 1e-12 * delta_m * N);

  // residual two-phonon coefficients vanish on the retained ladder
  const Matrix bb = b * b;
  const Matrix mask_R = R.block(0, 0, N - 2, N - 2);
  const Matrix mask_bb = bb.block(0, 0, N - 2, N - 2);
  const Complex c2 = (mask_bb.adjoint() * mask_R).trace() / (mask_bb.adjoint() * mask_bb).trace();
  CHECK(std::abs(c2) < 1e-9);
}

TEST_CASE("ramped frame") {
  const double Lambda = 1.0, delta_m = 10.0;

  SECTION("static schedule has no frame-velocity term") {
    RampSchedule flat{[](double) { return 0.7; }, 1e-7};
    const auto rf = build_time_dependent_frame(flat, delta_m, Lambda);
    CHECK(rf.H_Err(1.0, 8).mat().cwiseAbs().maxCoeff() < 1e-6);
  }

  SECTION("tanh ramp derivative and value") {
    const auto rf = build_time_dependent_frame(tanh_ramp(1.25, Lambda), delta_m, Lambda);
    CHECK(rf.schedule.rdot(0.0) == Approx(1.25 * Lambda / 2.0).epsilon(1e-5));
    CHECK(rf.schedule.r(3.0 / Lambda) == Approx(1.25 * std::tanh(1.5)).epsilon(1e-12));
    CHECK(rf.schedule.r(3.0 / Lambda) == Approx(1.131).epsilon(1e-3));
    CHECK(rf.Lambda_eff(2.0) == Approx(Lambda * std::exp(rf.schedule.r(2.0)) / 2.0));
    CHECK(rf.Delta_m(2.0) == Approx(delta_m / std::cosh(2.0 * rf.schedule.r(2.0))));
    CHECK(rf.H_Err(0.5, 12).is_hermitian(1e-12));
  }
}

TEST_CASE("two-NV model") {
  const int N = 14;
  const auto f = frame_for_r(4.0, 1.0, 1.0);

  SECTION("difference operator spectrum {0, 4} with multiplicity 2 each") {
    const auto X = two_nv_difference(N);
    const auto fI = frame_for_r(1.0, 0.0, 2.0);  // xi = 1
    auto fi = fI;
    fi.xi = 1.0;
    const auto X2 = ising(fi);
    Eigen::SelfAdjointEigenSolver<Matrix> es(X2.mat());
    CHECK(es.eigenvalues()(0) == Approx(0.0).margin(1e-13));
    CHECK(es.eigenvalues()(1) == Approx(0.0).margin(1e-13));
    CHECK(es.eigenvalues()(2) == Approx(4.0).epsilon(1e-13));
    CHECK(es.eigenvalues()(3) == Approx(4.0).epsilon(1e-13));
    (void)X;
  }

  SECTION("twisting term vanishes on aligned x-basis states") {
    const auto H = ising(f);
    Eigen::Vector4cd pp, mm;
    pp << 0.5, 0.5, 0.5, 0.5;
    mm << 0.5, -0.5, -0.5, 0.5;
    CHECK((H.mat() * pp).norm() < 1e-13);
    CHECK((H.mat() * mm).norm() < 1e-13);
  }

  SECTION("swap-and-flip symmetry") {
    const auto H = build_two_nv(f, N);
    // swap the two spins, flip the coupling sign via phonon parity
    const int D = 4 * N;
    Matrix Sym = Matrix::Zero(D, D);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        for (int n = 0; n < N; ++n) {
          const double parity = (n % 2 == 0) ? 1.0 : -1.0;
          Sym((s2 * 2 + s1) * N + n, (s1 * 2 + s2) * N + n) = parity;
        }
    const Matrix commut = H.mat() * Sym - Sym * H.mat();
    CHECK(commut.cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("polaron transform reproduces the effective model") {
    const auto fsw = frame_for_r(20.0, 0.0, 2.0);  // eta = Lambda_eff/Delta_m = 0.05
    REQUIRE(sw_parameter(fsw) == Approx(0.05));
    const int Nn = 24;
    const auto HRT = build_two_nv(fsw, Nn);
    const auto Heff = sw_effective(fsw, Nn);
    const auto X = two_nv_difference(Nn);
    const SpaceLayout L = two_nv_layout(Nn);
    const Matrix bmat = embed(fock_annihilation(Nn), L, "fock").mat();
    const Matrix Sgen = sw_parameter(fsw) * ((bmat.adjoint() - bmat) * X.mat());
    const Matrix eS = qops::expm(Operator(L, Sgen)).mat();
    const Matrix transformed = eS * HRT.mat() * eS.inverse();
    // compare away from the top of the Fock ladder
    const int keep = Nn - 6;
    double err = 0.0;
    for (int bi = 0; bi < 4; ++bi)
      for (int bj = 0; bj < 4; ++bj)
        err = std::max(err, (transformed - Heff.mat())
                                .block(bi * Nn, bj * Nn, keep, keep)
                                .cwiseAbs()
                                .maxCoeff());
    CHECK(err < 10.0 * 0.05 * 0.05 * fsw.Lambda_eff);
  }

  SECTION("lamb-dicke validity guard") {
    CHECK(sw_check(frame_for_r(10.0, 0.0, 1.0)).eta == Approx(0.05));
    CHECK_FALSE(sw_check(frame_for_r(10.0, 0.0, 1.0)).warning);
    CHECK(sw_check(frame_for_r(1.0, 0.0, 0.8)).warning);
    CHECK_THROWS_AS(sw_check(frame_for_r(1.0, 0.0, 2.5)), std::domain_error);
  }
}

TEST_CASE("ramped frame reproduces the driven lab model") {
  // closed system: the lab evolution under the ramped two-phonon drive,
  // mapped by the instantaneous squeeze, equals the squeezed-frame evolution
  // under the resonant + counter-rotating + frame-velocity pieces
  using namespace levspin::dynamics;
  const int N = 60;
  const double delta_m = 10.0, Lambda = 1.0, rmax = 1.25, T = 1.0;
  const auto ramp = tanh_ramp(rmax, Lambda);
  const SpaceLayout L = one_nv_layout(N);
  const auto s = spin_half_paulis();
  const auto a = embed(fock_annihilation(N), L, "fock");
  const auto nOp = Operator(L, (a.adjoint() * a).mat(), true);
  const auto xsx = Operator(L, ((a + a.adjoint()) * embed(s.sx, L, "spin")).mat(), true);
  const auto exch = Operator(
      L, (a * embed(s.sp, L, "spin") + a.adjoint() * embed(s.sm, L, "spin")).mat(), true);
  const Matrix am = fock_annihilation_matrix(N);
  const auto two_ph = embed(
      Operator(SpaceLayout{{"fock", N}}, (am * am + (am * am).adjoint()).eval(), true), L, "fock");

  Hamiltonian H_lab(L);
  H_lab.add_term([delta_m](double) { return delta_m; }, nOp);
  H_lab.add_term([Lambda](double) { return Lambda; }, exch);
  H_lab.add_term([&](double t) { return -0.5 * delta_m * std::tanh(2.0 * ramp.r(t)); }, two_ph);

  const auto rf = build_time_dependent_frame(ramp, delta_m, Lambda);
  Hamiltonian H_fr(L);
  H_fr.add_term([rf](double t) { return rf.Delta_m(t); }, nOp);
  H_fr.add_term([rf](double t) { return rf.Lambda_eff(t); }, xsx);
  const Operator counter(
      L, ((a - a.adjoint()) * (embed(s.sp, L, "spin") - embed(s.sm, L, "spin"))).mat(), true);
  H_fr.add_term([&](double t) { return 0.5 * Lambda * std::exp(-ramp.r(t)); }, counter);
  const Matrix gen = Complex(0, 1) * (am * am - (am * am).adjoint().eval());
  const auto vel = embed(Operator(SpaceLayout{{"fock", N}}, gen, true), L, "fock");
  H_fr.add_term([&](double t) { return 0.5 * ramp.rdot(t); }, vel);

  Vector psi0 = Vector::Zero(2 * N);
  psi0(N) = 1.0;  // |down>|0>; the frames coincide at t = 0 where r = 0
  const auto rho0 = DensityMatrix::pure(L, psi0);
  IntegratorOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-12;
  const auto lab = evolve_master(rho0, H_lab, {}, {0.0, T}, opts);
  const auto fr = evolve_master(rho0, H_fr, {}, {0.0, T}, opts);
  const Matrix S = embed(squeeze(ramp.r(T), N), L, "fock").mat();
  const Matrix mapped = S * lab.states.back().mat() * S.adjoint();
  CHECK((mapped - fr.states.back().mat()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("squeezed-frame pieces: degenerate ladder and counter-rotating scale") {
  const int N = 12;

  // no spin splitting, no coupling: doubly degenerate oscillator ladder
  auto f = frame_for_r(1.7, 0.9, 0.0);
  f.delta0 = 0.0;
  const auto H = build_H_RO(f, N);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat());
  for (int n = 0; n < N; ++n) {
    CHECK(es.eigenvalues()(2 * n) == Approx(f.Delta_m * n).margin(1e-12));
    CHECK(es.eigenvalues()(2 * n + 1) == Approx(f.Delta_m * n).margin(1e-12));
  }

  // the counter-rotating piece shrinks as e^{-2r} against the resonant one
  auto ratio_at = [N](double r) {
    const auto fr = frame_for_r(2.0, r, 0.8);
    const double sq = build_H_Sq(fr, N).mat().norm();
    const auto s = qops::spin_half_paulis();
    const qops::SpaceLayout L = one_nv_layout(N);
    const auto b = embed(qops::fock_annihilation(N), L, "fock");
    const double ro = (fr.Lambda_eff * ((b + b.adjoint()) * embed(s.sx, L, "spin"))).mat().norm();
    return sq / ro;
  };
  CHECK(ratio_at(3.0) / ratio_at(0.0) == Approx(std::exp(-6.0)).epsilon(1e-10));
}
