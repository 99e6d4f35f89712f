#include <doctest.h>

#include "dfrc/irs_design.hpp"
#include "support.hpp"

using namespace dfrc;
using namespace testing;

TEST_CASE("phase objective vanishes with zero auxiliaries") {
  std::mt19937_64 rng(1);
  const Scenario s = random_scenario(1);
  const DesignState d = random_design(rng, s);
  const PhiObjective obj = build_phi_objective(d, {}, s);
  CHECK(obj.Q.norm() == 0.0);
  CHECK(obj.lin.norm() == 0.0);
}

TEST_CASE("phase objective reproduces the transformed objective") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s = random_scenario(10 + trial);
    DesignState d = random_design(rng, s);
    if (trial % 4 == 0) d.W_n.setZero();
    const AuxiliaryState aux = update_auxiliaries(d, s);
    const PhiObjective obj = build_phi_objective(d, aux, s);
    CHECK((obj.Q - obj.Q.adjoint()).norm() < 1e-14 * std::max(1.0, obj.Q.norm()));
    for (int k = 0; k < 5; ++k) {
      DesignState e = d;
      e.phi = random_phases(rng, s.n_irs());
      const double direct = linearized_objective(e, aux, s);
      CHECK(std::abs(obj.value(e.phi) - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
    // exact against the secrecy rate at the refresh point
    CHECK(std::abs(obj.value(d.phi) - secrecy_rate(d, s)) <= 1e-9);
  }
}

TEST_CASE("proximal term on the unit torus") {
  std::mt19937_64 rng(3);
  const Scenario s = random_scenario(3);
  const DesignState d = random_design(rng, s);
  const PhiObjective obj = build_phi_objective(d, update_auxiliaries(d, s), s);
  const PhaseVector anchor = random_phases(rng, s.n_irs());
  const PhiObjective prox = with_proximal(obj, anchor, 2.5);
  for (int k = 0; k < 5; ++k) {
    const PhaseVector phi = random_phases(rng, s.n_irs());
    const double expected = obj.value(phi) - 2.5 * (phi.values() - anchor.values()).squaredNorm();
    CHECK(std::abs(prox.value(phi) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
  }
  CHECK(std::abs(prox.value(anchor) - obj.value(anchor)) < 1e-10);
}

TEST_CASE("vectorized radar snr") {
  std::mt19937_64 rng(4);
  SUBCASE("zero transmit covariance") {
    const Scenario s = random_scenario(4);
    DesignState d = random_design(rng, s);
    d.w.setZero();
    d.W_n.setZero();
    CHECK(vectorized_snr_matrix(d, s).norm() == 0.0);
  }
  SUBCASE("quartic identity and positive semidefiniteness") {
    for (int trial = 0; trial < 10; ++trial) {
      const Scenario s = random_scenario(40 + trial, small_config(3, 3, 1, trial % 2 == 0 ? 2 : 3));
      const DesignState d = random_design(rng, s, 0.5 + trial);
      const CMat Z = vectorized_snr_matrix(d, s);
      const CVec u = vectorized_phase_matrix(d.phi, s.irs_steering());
      const double snr = std::norm(s.beta) / s.sigma2_r * std::real(u.dot(Z * u));
      CHECK(std::abs(snr - radar_snr(d, s)) <= 1e-9 * radar_snr(d, s));
      Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Z + Z.adjoint()));
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * Z.norm());

      // Kronecker identity on arbitrary matrices U: vec(U)^H Z vec(U) = tr(U^H A U B)
      const CMat U = random_cmat(rng, s.n_irs(), s.n_irs());
      const CVec vu = Eigen::Map<const CVec>(U.data(), U.size());
      const CMat A = s.H_ul.adjoint() * s.H_ul;
      const CMat B = s.H_dl * (d.w * d.w.adjoint() + d.W_n * d.W_n.adjoint()) * s.H_dl.adjoint();
      const cplx lhs = vu.dot(Z * vu);
      const cplx rhs = (U.adjoint() * A * U * B).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    }
  }
}

TEST_CASE("radar snr surrogate touches and stays below") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario s = random_scenario(60 + trial);
    const DesignState d = random_design(rng, s);
    const double gamma_th = 0.05;
    const SnrSurrogate sur = build_snr_surrogate(d.phi, d, s, gamma_th);
    const double at = radar_snr(d, s);
    CHECK(std::abs(sur.value(d.phi) - at) <= 1e-8 * std::max(1.0, at));
    CHECK(sur.imag_residual < 1e-8 * std::max(1.0, at));
    CHECK(sur.offset == doctest::Approx(at).epsilon(1e-10));
    CHECK(sur.gamma_th_shifted == doctest::Approx(gamma_th + sur.offset).epsilon(1e-14));
    for (int k = 0; k < 50; ++k) {
      DesignState e = d;
      e.phi = random_phases(rng, s.n_irs());
      const double snr = radar_snr(e, s);
      CHECK(sur.value(e.phi) <= snr + 1e-8 * std::max(1.0, snr));
      // threshold bookkeeping
      CHECK((sur.value(e.phi) >= gamma_th) == (sur.quadratic(e.phi) >= sur.gamma_th_shifted));
    }
  }
}

TEST_CASE("surrogate of a silent transmitter is zero") {
  std::mt19937_64 rng(6);
  const Scenario s = random_scenario(6);
  DesignState d = random_design(rng, s);
  d.w.setZero();
  d.W_n.setZero();
  const SnrSurrogate sur = build_snr_surrogate(d.phi, d, s, 0.0);
  CHECK(sur.L2.norm() == 0.0);
  CHECK(sur.L3.norm() == 0.0);
  CHECK(sur.value(random_phases(rng, s.n_irs())) == 0.0);
}

TEST_CASE("relaxed reflect-side program structure") {
  std::mt19937_64 rng(7);
  ScenarioConfig c;
  const Scenario s = random_scenario(7, c);
  const DesignState d = random_design(rng, s);
  const PhiObjective obj = build_phi_objective(d, update_auxiliaries(d, s), s);
  const SnrSurrogate sur = build_snr_surrogate(d.phi, d, s, 0.0794);
  const sdp::SdpProblem p = build_subproblem2(obj, sur);
  CHECK(p.block_dims[0] == 51);
  CHECK(p.num_blocks() == 26);
  CHECK(p.constraints.size() == 4u * 25u + 2u);

  SnrSurrogate silent;
  silent.L2 = CMat::Zero(25, 25);
  silent.L3 = CMat::Zero(25, 25);
  const sdp::SdpProblem q = build_subproblem2(obj, silent);
  CHECK(q.constraints.size() == 4u * 25u + 1u);
}

TEST_CASE("single-element reflect program has a closed form") {
  for (double angle : {0.3, -2.0, 2.9}) {
    PhiObjective obj;
    obj.Q = CMat::Constant(1, 1, -0.7);
    obj.lin = CVec::Constant(1, std::polar(1.3, angle));
    SnrSurrogate sur;
    sur.L2 = CMat::Zero(1, 1);
    sur.L3 = CMat::Zero(1, 1);
    const sdp::SdpProblem p = build_subproblem2(obj, sur);
    const sdp::SdpSolution sol = sdp::solve(p, {1e-9, 100});
    REQUIRE(sol.status == sdp::SolveStatus::Optimal);
    const CVec phi = relaxed_phases(sol, p);
    CHECK(std::abs(phi[0] - std::polar(1.0, -angle)) < 1e-6);
    CHECK(sol.objective == doctest::Approx(1.3 - 0.7).epsilon(1e-7));
  }
}

TEST_CASE("phase extraction") {
  std::mt19937_64 rng(8);
  const PhaseCheck anything{[](const PhaseVector&) { return true; }, [](const PhaseVector&) { return 0.0; }};

  SUBCASE("unit-modulus input is kept") {
    const PhaseVector phi = random_phases(rng, 4);
    const PhaseExtraction e = extract_phases(phi.values(), random_phases(rng, 4), anything);
    CHECK(e.status == PhaseStatus::Projected);
    CHECK((e.phi.values() - phi.values()).norm() < 1e-15);
  }
  SUBCASE("projection onto the unit circle") {
    CVec relaxed(2);
    relaxed << 2.0, cplx(0.0, 0.5);
    const PhaseExtraction e = extract_phases(relaxed, PhaseVector(CVec::Ones(2)), anything);
    CHECK(std::abs(e.phi.values()[0] - 1.0) < 1e-15);
    CHECK(std::abs(e.phi.values()[1] - cplx(0, 1)) < 1e-15);
  }
  SUBCASE("guarded ascent on a real objective") {
    for (int trial = 0; trial < 10; ++trial) {
      const Scenario s = random_scenario(90 + trial);
      const DesignState d = random_design(rng, s);
      const AuxiliaryState aux = update_auxiliaries(d, s);
      const double threshold = 0.9 * radar_snr(d, s);
      const PhaseCheck check{[&](const PhaseVector& phi) {
                               DesignState e = d;
                               e.phi = phi;
                               return radar_snr(e, s) >= threshold;
                             },
                             [&](const PhaseVector& phi) {
                               DesignState e = d;
                               e.phi = phi;
                               return linearized_objective(e, aux, s);
                             }};
      const CVec relaxed = 1.5 * random_cvec(rng, s.n_irs());
      const PhaseExtraction e = extract_phases(relaxed, d.phi, check);
      const double base = check.objective(d.phi);
      if (e.status == PhaseStatus::RepairFailed) {
        CHECK(e.phi.values() == d.phi.values());
      } else {
        CHECK(check.objective(e.phi) >= base - 1e-6);
        CHECK(check.feasible(e.phi));
      }
    }
  }
}

TEST_CASE("phase interpolation follows the shorter arc") {
  const PhaseVector a = PhaseVector::from_angles(RVec::Constant(1, 3.0));
  const PhaseVector b = PhaseVector::from_angles(RVec::Constant(1, -3.0));
  CHECK(std::abs(interpolate_phases(a, b, 0.0).values()[0] - a.values()[0]) < 1e-15);
  CHECK(std::abs(interpolate_phases(a, b, 1.0).values()[0] - b.values()[0]) < 1e-12);
  CHECK(std::abs(interpolate_phases(a, b, 0.5).values()[0] - cplx(-1.0, 0.0)) < 1e-12);
}
