#include "dfrc/irs_design.hpp"

#include <cmath>
#include <limits>

namespace dfrc {

double PhiObjective::value(const CVec& phi) const {
  const cplx lin_part = phi.transpose() * lin;
  const cplx quad = phi.transpose() * Q * phi.conjugate();
  return const_term + lin_part.real() + quad.real();
}

PhiObjective with_proximal(const PhiObjective& obj, const CVec& anchor, double rho) {
  if (anchor.size() != obj.lin.size()) throw ConfigError("with_proximal: anchor has wrong length");
  if (!(rho >= 0.0)) throw ConfigError("with_proximal: rho must be >= 0");
  PhiObjective out = obj;
  out.lin += 2.0 * rho * anchor.conjugate();
  out.const_term -= 2.0 * rho * static_cast<double>(anchor.size());
  return out;
}

PhiObjective build_phi_objective(const DesignState& d, const AuxiliaryState& aux, const Scenario& s) {
  const CMat D = user_factor(s);
  const CMat E = ed_factor(s);
  const double au2 = aux.alpha_u * aux.alpha_u;
  const double ate2 = aux.alpha_te * aux.alpha_te;
  const cplx lu = aux.alpha_u * std::sqrt(1.0 + aux.gamma_u) * std::polar(1.0, -aux.theta_u);
  const cplx lte = aux.alpha_te * std::sqrt(1.0 + aux.gamma_te) * std::polar(1.0, -aux.theta_te);

  const CMat Rw = d.w * d.w.adjoint();
  const CMat Rn = d.W_n.size() == 0 ? CMat::Zero(s.n_tx(), s.n_tx()) : CMat(d.W_n * d.W_n.adjoint());
  const CMat R = Rw + Rn;
  const CVec g_conj = s.g.conjugate();

  // Quadratic terms from the information beam and the AN share the same structure.
  PhiObjective obj;
  const CMat Q = ate2 * (E * R * E.adjoint()) - au2 * (D * R * D.adjoint());
  obj.Q = 0.5 * (Q + Q.adjoint());
  const CVec eta = 2.0 * (lu * (D * d.w) - lte * (E * d.w));
  const CVec mu_all = 2.0 * au2 * (D * (R * g_conj));
  obj.lin = eta - mu_all;

  const double c1 = 2.0 * std::real(lu * (s.g.transpose() * d.w).value());
  const double c2_all = au2 * std::real((s.g.transpose() * R * g_conj).value());
  const double c = transform_constants(aux, s.g, CVec::Zero(s.n_tx()), s.sigma2_u, s.sigma2_te).c;
  obj.const_term = c + c1 - c2_all;
  return obj;
}

namespace {

CMat transmit_covariance(const DesignState& d) {
  CMat R = d.w * d.w.adjoint();
  if (d.W_n.size() != 0) R += d.W_n * d.W_n.adjoint();
  return R;
}

} // namespace

CVec vectorized_phase_matrix(const CVec& phi, const CVec& a) {
  const CVec pa = phi.cwiseProduct(a);
  const CMat U = pa * pa.transpose();
  return Eigen::Map<const CVec>(U.data(), U.size());
}

CMat vectorized_snr_matrix(const DesignState& d, const Scenario& s) {
  const CMat A = s.H_ul.adjoint() * s.H_ul;
  const CMat Bt = (s.H_dl * transmit_covariance(d) * s.H_dl.adjoint()).transpose();
  const Eigen::Index n = A.rows();
  CMat Z(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) Z.block(i * n, j * n, n, n) = Bt(i, j) * A;
  return Z;
}

double SnrSurrogate::quadratic(const CVec& phi) const {
  const cplx t2 = phi.adjoint() * L2 * phi.conjugate();
  const cplx t3 = phi.transpose() * L3 * phi;
  return (t2 + t3).real();
}

SnrSurrogate build_snr_surrogate(const PhaseVector& phi_t, const DesignState& d, const Scenario& s,
                                 double gamma_th) {
  const CVec a = s.irs_steering();
  if (phi_t.size() != a.size()) throw ConfigError("snr surrogate: phase vector has wrong length");
  const double k = std::norm(s.beta) / s.sigma2_r;
  const CMat A = s.H_ul.adjoint() * s.H_ul;
  const CMat B = s.H_dl * transmit_covariance(d) * s.H_dl.adjoint();
  const CVec pa = phi_t.values().cwiseProduct(a);
  const CMat Ut = pa * pa.transpose();

  const CMat V = A * Ut * B;                                // vec(V) = Z u_t
  const CMat Y = A.transpose() * Ut.conjugate() * B.transpose(); // vec(Y) = Z^T u_t^*

  SnrSurrogate sur;
  sur.L2 = k * (a.conjugate() * a.adjoint()).cwiseProduct(V.transpose());
  sur.L3 = k * (a * a.transpose()).cwiseProduct(Y.transpose());
  sur.offset = k * Ut.conjugate().cwiseProduct(V).sum().real();
  sur.gamma_th_shifted = gamma_th + sur.offset;

  const CVec& p = phi_t.values();
  const cplx pair = cplx(p.adjoint() * sur.L2 * p.conjugate()) + cplx(p.transpose() * sur.L3 * p);
  sur.imag_residual = std::abs(pair.imag());
  return sur;
}

namespace {

RMat sym(const RMat& m) { return 0.5 * (m + m.transpose()); }

RMat unit_pair(int dim, int i, int j) {
  RMat e = RMat::Zero(dim, dim);
  if (i == j) {
    e(i, i) = 1.0;
  } else {
    e(i, j) = 1.0;
    e(j, i) = 1.0;
  }
  return e;
}

} // namespace

sdp::SdpProblem build_subproblem2(const PhiObjective& obj, const SnrSurrogate& sur) {
  const int n = static_cast<int>(obj.lin.size());
  if (n < 1 || obj.Q.rows() != n || obj.Q.cols() != n || sur.L2.rows() != n || sur.L3.rows() != n)
    throw ConfigError("sub-problem 2: inconsistent dimensions");
  const int dim = 2 * n + 1;

  CMat P(n, 2 * n);
  P << CMat::Identity(n, n), cplx(0.0, 1.0) * CMat::Identity(n, n);

  sdp::SdpProblem p;
  const int main = p.add_block(dim);
  const CMat Qh = 0.5 * (obj.Q + obj.Q.adjoint());
  RMat& c = p.objective[main];
  c.topLeftCorner(2 * n, 2 * n) = sym(RMat((P.transpose() * Qh * P.conjugate()).real()));
  const RVec lin = (P.transpose() * obj.lin).real();
  c.block(0, 2 * n, 2 * n, 1) = 0.5 * lin;
  c.block(2 * n, 0, 1, 2 * n) = 0.5 * lin.transpose();

  for (int i = 0; i < n; ++i) {
    p.constraints.push_back({{{main, unit_pair(dim, i, i) + unit_pair(dim, n + i, n + i)}}, sdp::Sense::Equal, 1.0});
  }
  p.constraints.push_back({{{main, unit_pair(dim, 2 * n, 2 * n)}}, sdp::Sense::Equal, 1.0});

  // |[R2]_nn| <= 1 via [[1 + Re r, Im r], [Im r, 1 - Re r]] PSD with r = [R2]_nn
  // = X_nn - X_{N+n,N+n} + 2i X_{n,N+n}.
  RMat half_diff(2, 2), half_off(2, 2);
  half_diff << 0.5, 0.0, 0.0, -0.5;
  half_off << 0.0, 0.5, 0.5, 0.0;
  for (int i = 0; i < n; ++i) {
    const int b = p.add_block(2);
    p.constraints.push_back({{{b, RMat::Identity(2, 2)}}, sdp::Sense::Equal, 2.0});
    p.constraints.push_back(
        {{{b, half_diff}, {main, -(unit_pair(dim, i, i) - unit_pair(dim, n + i, n + i))}}, sdp::Sense::Equal, 0.0});
    p.constraints.push_back({{{b, half_off}, {main, -unit_pair(dim, i, n + i)}}, sdp::Sense::Equal, 0.0});
  }

  const CMat snr = P.adjoint() * sur.L2 * P.conjugate() + P.transpose() * sur.L3 * P;
  RMat snr_coeff = RMat::Zero(dim, dim);
  snr_coeff.topLeftCorner(2 * n, 2 * n) = sym(RMat(snr.real()));
  const bool vacuous = snr_coeff.cwiseAbs().maxCoeff() == 0.0 && sur.gamma_th_shifted <= 0.0;
  if (!vacuous) p.constraints.push_back({{{main, snr_coeff}}, sdp::Sense::GreaterEqual, sur.gamma_th_shifted});

  p.views["x"] = {main, 0, 2 * n, 2 * n, 1, false};
  p.views["X"] = {main, 0, 0, 2 * n, 2 * n, false};
  return p;
}

CVec relaxed_phases(const sdp::SdpSolution& solution, const sdp::SdpProblem& problem) {
  const RMat x = sdp::real_view(solution, problem, "x");
  const Eigen::Index n = x.rows() / 2;
  CVec phi(n);
  for (Eigen::Index i = 0; i < n; ++i) phi[i] = cplx(x(i, 0), x(n + i, 0));
  return phi;
}

const char* to_string(PhaseStatus status) {
  switch (status) {
  case PhaseStatus::Projected: return "projected";
  case PhaseStatus::Repaired: return "repaired";
  case PhaseStatus::RepairFailed: return "repair_failed";
  }
  return "?";
}

PhaseVector interpolate_phases(const PhaseVector& from, const PhaseVector& to, double s) {
  if (from.size() != to.size()) throw ConfigError("interpolate_phases: length mismatch");
  const RVec a = from.angles();
  const RVec b = to.angles();
  RVec out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = a[i] + s * std::remainder(b[i] - a[i], 2.0 * kPi);
  return PhaseVector::from_angles(out);
}

PhaseExtraction extract_phases(const CVec& relaxed, const PhaseVector& phi_t, const PhaseCheck& check) {
  if (relaxed.size() != phi_t.size()) throw ConfigError("extract_phases: length mismatch");
  PhaseExtraction out;
  const PhaseVector target = PhaseVector::project(relaxed);
  const double base = check.objective(phi_t);
  auto admissible = [&](const PhaseVector& cand, double& value) {
    ++out.evaluations;
    if (!check.feasible(cand)) return false;
    value = check.objective(cand);
    return value >= base - 1e-6;
  };

  double value = 0.0;
  if (admissible(target, value)) {
    out.phi = target;
    out.status = PhaseStatus::Projected;
    return out;
  }

  double lo = 0.0, hi = 1.0;
  double best = -std::numeric_limits<double>::infinity();
  PhaseVector best_phi;
  for (int step = 0; step < 20; ++step) {
    const double mid = 0.5 * (lo + hi);
    const PhaseVector cand = interpolate_phases(phi_t, target, mid);
    if (admissible(cand, value)) {
      if (value > best) {
        best = value;
        best_phi = cand;
      }
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best_phi.size() == 0) {
    out.phi = phi_t;
    out.status = PhaseStatus::RepairFailed;
    return out;
  }
  out.phi = best_phi;
  out.status = PhaseStatus::Repaired;
  return out;
}

} // namespace dfrc
