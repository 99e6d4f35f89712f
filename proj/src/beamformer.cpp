#include "dfrc/beamformer.hpp"

#include <cmath>

namespace dfrc {

void Subproblem1Data::validate() const {
  const Eigen::Index n = v.size();
  if (n < 1) throw ConfigError("sub-problem 1: empty precoder");
  if (M.rows() != n || M.cols() != n) throw ConfigError("sub-problem 1: M has wrong shape");
  if (C_T.cols() != n) throw ConfigError("sub-problem 1: cascade channel has wrong shape");
  if (!(P_R > 0.0)) throw ConfigError("sub-problem 1: P_R must be > 0");
  if (!(gamma_th >= 0.0)) throw ConfigError("sub-problem 1: gamma_th must be >= 0");
  if (!(sigma2_r > 0.0)) throw ConfigError("sub-problem 1: sigma2_r must be > 0");
  if (omega && !(*omega >= 0.0 && *omega <= 1.0)) throw ConfigError("sub-problem 1: omega must lie in [0, 1]");
}

Subproblem1Data make_subproblem1_data(const TransformConstants& k, const CMat& cascade, double sigma2_r,
                                      double P_R, double gamma_th, std::optional<double> omega) {
  Subproblem1Data d;
  d.v = k.v;
  d.M = k.M;
  d.C_T = cascade;
  d.sigma2_r = sigma2_r;
  d.P_R = P_R;
  d.gamma_th = gamma_th;
  d.omega = omega;
  return d;
}

sdp::SdpProblem build_subproblem1(const Subproblem1Data& data) {
  data.validate();
  const int n = static_cast<int>(data.v.size());
  const bool has_w = !data.omega || *data.omega > 0.0;
  const bool has_an = !data.omega || *data.omega < 1.0;

  const CMat M = 0.5 * (data.M + data.M.adjoint());
  const CMat K = data.C_T.adjoint() * data.C_T / data.sigma2_r;
  const CMat K_h = 0.5 * (K + K.adjoint());

  sdp::HermitianProblem hp;
  int schur = -1;
  int an = -1;
  sdp::HermitianConstraint power{{}, sdp::Sense::LessEqual, data.P_R};
  sdp::HermitianConstraint snr{{}, sdp::Sense::GreaterEqual, data.gamma_th};

  if (has_w) {
    schur = hp.add_block(n + 1);
    CMat& c = hp.objective[schur];
    c.topLeftCorner(n, n) = M;
    for (int i = 0; i < n; ++i) {
      c(n, i) = 0.5 * data.v[i];
      c(i, n) = 0.5 * std::conj(data.v[i]);
    }
    CMat corner = CMat::Zero(n + 1, n + 1);
    corner(n, n) = 1.0;
    hp.constraints.push_back({{{schur, corner}}, sdp::Sense::Equal, 1.0});

    CMat tr = CMat::Zero(n + 1, n + 1);
    tr.topLeftCorner(n, n).setIdentity();
    power.terms.push_back({schur, tr});
    CMat k = CMat::Zero(n + 1, n + 1);
    k.topLeftCorner(n, n) = K_h;
    snr.terms.push_back({schur, k});
    if (data.omega) hp.constraints.push_back({{{schur, tr}}, sdp::Sense::LessEqual, *data.omega * data.P_R});

    hp.views["R_w"] = {schur, 0, 0, n, n, true};
    hp.views["w"] = {schur, 0, n, n, 1, true};
  }
  if (has_an) {
    an = hp.add_block(n);
    hp.objective[an] = M;
    const CMat id = CMat::Identity(n, n);
    power.terms.push_back({an, id});
    snr.terms.push_back({an, K_h});
    if (data.omega) hp.constraints.push_back({{{an, id}}, sdp::Sense::LessEqual, (1.0 - *data.omega) * data.P_R});
    hp.views["R_Wn"] = {an, 0, 0, n, n, true};
  }
  hp.constraints.push_back(power);
  hp.constraints.push_back(snr);
  return sdp::realify(hp);
}

Subproblem1Result solve_subproblem1(const sdp::SdpProblem& problem, const Subproblem1Data& data,
                                    const sdp::SolverOptions& options) {
  data.validate();
  const Eigen::Index n = data.v.size();
  const bool has_w = problem.views.count("w") > 0;
  const bool has_an = problem.views.count("R_Wn") > 0;
  if (!has_w && !has_an) throw ConfigError("sub-problem 1: problem carries no design views");
  if (has_w != (problem.views.count("R_w") > 0)) throw ConfigError("sub-problem 1: inconsistent views");

  Subproblem1Result r;
  r.solution = sdp::solve(problem, options);
  r.w = has_w ? CVec(sdp::complex_view(r.solution, problem, "w").col(0)) : CVec::Zero(n);
  r.R_w = has_w ? sdp::complex_view(r.solution, problem, "R_w") : CMat::Zero(n, n);
  r.R_Wn = has_an ? sdp::complex_view(r.solution, problem, "R_Wn") : CMat::Zero(n, n);
  if (r.w.size() != n || r.R_Wn.rows() != n) throw ConfigError("sub-problem 1: view sizes do not match data");

  const CMat M = 0.5 * (data.M + data.M.adjoint());
  r.value = (data.v.transpose() * r.w)(0).real() + (M * (r.R_w + r.R_Wn)).trace().real();

  if (r.solution.status != sdp::SolveStatus::Optimal) {
    r.W_n = CMat::Zero(n, n);
    return r;
  }
  CMat cov = 0.5 * (r.R_Wn + r.R_Wn.adjoint());
  if (!data.omega && has_w) {
    const CMat slack = r.R_w - r.w * r.w.adjoint();
    cov += 0.5 * (slack + slack.adjoint());
  }
  r.W_n = psd_sqrt(cov);
  return r;
}

DesignState blend_beam(const DesignState& from, const Subproblem1Result& to, double s, bool fold_slack) {
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("blend_beam: fraction must lie in [0, 1]");
  DesignState d = from;
  const CMat an0 = from.W_n * from.W_n.adjoint();
  d.w = (1.0 - s) * from.w + s * to.w;
  CMat cov = (1.0 - s) * an0 + s * to.R_Wn;
  if (fold_slack) cov += (1.0 - s) * (from.w * from.w.adjoint()) + s * to.R_w - d.w * d.w.adjoint();
  d.W_n = psd_sqrt(0.5 * (cov + cov.adjoint()));
  return d;
}

CMat psd_sqrt(const CMat& R) {
  if (R.rows() != R.cols()) throw ConfigError("psd_sqrt: matrix is not square");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale) throw ConfigError("psd_sqrt: matrix is not Hermitian");
  if (R.size() == 0) return R;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (R + R.adjoint()));
  RVec lam = es.eigenvalues();
  const double norm = lam.cwiseAbs().maxCoeff();
  if (norm == 0.0) return CMat::Zero(R.rows(), R.cols());
  if (lam.minCoeff() < -1e-6 * norm)
    throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lam.minCoeff()) + " is significantly negative");
  lam = lam.cwiseMax(0.0).cwiseSqrt();
  const CMat& U = es.eigenvectors();
  return U * lam.cast<cplx>().asDiagonal() * U.adjoint();
}

} // namespace dfrc
