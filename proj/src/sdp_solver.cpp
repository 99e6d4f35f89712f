// Primal-dual interior-point method on the homogeneous self-dual embedding of
//
//   min <C, X>  s.t.  A(X) = b,  X PSD        max b^T y  s.t.  S = C - A^T(y) PSD
//
// The embedding adds tau, kappa >= 0:
//   A(X) - b tau = 0,   C tau - A^T(y) - S = 0,   kappa + <C, X> - b^T y = 0.
// tau > 0 at the limit gives an optimal pair (X, y, S) / tau, kappa > 0 gives an
// infeasibility certificate. Search directions use Nesterov-Todd scaling
// (W S W = X) and a Mehrotra predictor-corrector; the Newton system is reduced to
// the m x m Schur complement M_ij = tr(A_i W A_j W) plus one scalar equation for tau.

#include <algorithm>
#include <cmath>
#include <limits>

#include "dfrc/sdp.hpp"

namespace dfrc::sdp {

namespace {

using Blocks = std::vector<RMat>;

struct Term {
  int block = 0;
  bool dense = false;
  RMat mat;
  std::vector<int> r, c;
  std::vector<double> v;
};

struct Model {
  std::vector<int> dims;
  Blocks C;
  std::vector<std::vector<Term>> rows;
  RVec b;
  std::vector<std::vector<std::pair<int, int>>> touching; // per block: (row, term index)
  RVec row_scale;
  double obj_scale = 1.0;
  int user_blocks = 0;
  double nu = 0.0;
};

Term make_term(int block, const RMat& coeff) {
  Term t;
  t.block = block;
  const Eigen::Index n = coeff.rows();
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (coeff(i, j) != 0.0) ++nnz;
  t.dense = nnz > 2 * n;
  if (t.dense) {
    t.mat = coeff;
  } else {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (coeff(i, j) != 0.0) {
          t.r.push_back(static_cast<int>(i));
          t.c.push_back(static_cast<int>(j));
          t.v.push_back(coeff(i, j));
        }
  }
  return t;
}

double term_dot(const Term& t, const RMat& x) {
  if (t.dense) return t.mat.cwiseProduct(x).sum();
  double s = 0.0;
  for (std::size_t k = 0; k < t.v.size(); ++k) s += t.v[k] * x(t.r[k], t.c[k]);
  return s;
}

void term_axpy(const Term& t, double alpha, RMat& x) {
  if (t.dense) {
    x.noalias() += alpha * t.mat;
    return;
  }
  for (std::size_t k = 0; k < t.v.size(); ++k) x(t.r[k], t.c[k]) += alpha * t.v[k];
}

double term_norm2(const Term& t) {
  if (t.dense) return t.mat.squaredNorm();
  double s = 0.0;
  for (double v : t.v) s += v * v;
  return s;
}

void term_scale(Term& t, double s) {
  if (t.dense) t.mat *= s;
  for (double& v : t.v) v *= s;
}

Model build_model(const SdpProblem& p) {
  Model m;
  m.dims = p.block_dims;
  m.user_blocks = p.num_blocks();
  const int rows = static_cast<int>(p.constraints.size());
  m.rows.resize(rows);
  m.b.resize(rows);
  m.row_scale.resize(rows);

  for (int i = 0; i < rows; ++i) {
    const auto& con = p.constraints[i];
    for (const auto& t : con.terms) {
      // Merge repeated blocks in one row.
      auto it = std::find_if(m.rows[i].begin(), m.rows[i].end(), [&](const Term& e) { return e.block == t.block; });
      if (it == m.rows[i].end()) {
        m.rows[i].push_back(make_term(t.block, t.coeff));
      } else {
        RMat merged = it->dense ? it->mat : RMat::Zero(t.coeff.rows(), t.coeff.cols());
        if (!it->dense)
          for (std::size_t k = 0; k < it->v.size(); ++k) merged(it->r[k], it->c[k]) += it->v[k];
        *it = make_term(t.block, merged + t.coeff);
      }
    }
    if (con.sense != Sense::Equal) {
      const int blk = static_cast<int>(m.dims.size());
      m.dims.push_back(1);
      RMat one(1, 1);
      one(0, 0) = con.sense == Sense::LessEqual ? 1.0 : -1.0;
      m.rows[i].push_back(make_term(blk, one));
    }
    double nrm = 0.0;
    for (const auto& t : m.rows[i]) nrm += term_norm2(t);
    nrm = std::sqrt(nrm);
    const double s = nrm > 0.0 ? 1.0 / nrm : 1.0;
    for (auto& t : m.rows[i]) term_scale(t, s);
    m.row_scale[i] = s;
    m.b[i] = con.rhs * s;
  }

  double cn = 0.0;
  for (const auto& c : p.objective) cn += c.squaredNorm();
  cn = std::sqrt(cn);
  m.obj_scale = cn > 0.0 ? cn : 1.0;
  m.C.resize(m.dims.size());
  for (std::size_t b = 0; b < m.dims.size(); ++b) {
    if (static_cast<int>(b) < m.user_blocks)
      m.C[b] = -p.objective[b] / m.obj_scale;
    else
      m.C[b] = RMat::Zero(1, 1);
  }

  m.touching.resize(m.dims.size());
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < static_cast<int>(m.rows[i].size()); ++k) m.touching[m.rows[i][k].block].push_back({i, k});

  m.nu = 0.0;
  for (int d : m.dims) m.nu += d;
  return m;
}

double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

RVec apply_A(const Model& m, const Blocks& x) {
  RVec out(static_cast<Eigen::Index>(m.rows.size()));
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    double s = 0.0;
    for (const auto& t : m.rows[i]) s += term_dot(t, x[t.block]);
    out[static_cast<Eigen::Index>(i)] = s;
  }
  return out;
}

Blocks apply_At(const Model& m, const RVec& y) {
  Blocks out(m.dims.size());
  for (std::size_t b = 0; b < m.dims.size(); ++b) out[b] = RMat::Zero(m.dims[b], m.dims[b]);
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (const auto& t : m.rows[i]) term_axpy(t, y[static_cast<Eigen::Index>(i)], out[t.block]);
  return out;
}

/// NT scaling of one block: W = G G^T, G^{-1} X G^{-T} = G^T S G = diag(lambda).
struct Scaling {
  RMat G;
  RMat Ginv;
  RMat W;
  RVec lambda;
};

bool nt_scaling(const RMat& x, const RMat& s, Scaling& out) {
  Eigen::LLT<RMat> lx(x);
  Eigen::LLT<RMat> ls(s);
  if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
  const RMat Lx = lx.matrixL();
  const RMat Ls = ls.matrixL();
  Eigen::JacobiSVD<RMat> svd(Ls.transpose() * Lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec sv = svd.singularValues();
  if (sv.minCoeff() <= 0.0 || !std::isfinite(sv.maxCoeff())) return false;
  const RVec isq = sv.cwiseSqrt().cwiseInverse();
  out.lambda = sv;
  out.G = Lx * svd.matrixV() * isq.asDiagonal();
  out.Ginv = isq.asDiagonal() * svd.matrixU().transpose() * Ls.transpose();
  out.W = out.G * out.G.transpose();
  return true;
}

/// Largest alpha with diag(lambda) + alpha * d PSD (infinity if unbounded).
double max_step(const RVec& lambda, const RMat& d) {
  const RVec isq = lambda.cwiseSqrt().cwiseInverse();
  const RMat scaled = isq.asDiagonal() * d * isq.asDiagonal();
  double emin;
  if (scaled.rows() == 1) {
    emin = scaled(0, 0);
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (scaled + scaled.transpose()), Eigen::EigenvaluesOnly);
    emin = es.eigenvalues()(0);
  }
  return emin < 0.0 ? -1.0 / emin : std::numeric_limits<double>::infinity();
}

RMat schur_complement(const Model& m, const std::vector<Scaling>& sc) {
  const Eigen::Index rows = static_cast<Eigen::Index>(m.rows.size());
  RMat M = RMat::Zero(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (const auto& t : m.rows[i]) {
      const RMat& W = sc[t.block].W;
      RMat T;
      if (t.dense) {
        T.noalias() = W * t.mat * W;
      } else {
        T = RMat::Zero(W.rows(), W.cols());
        for (std::size_t k = 0; k < t.v.size(); ++k) T.noalias() += t.v[k] * W.col(t.r[k]) * W.row(t.c[k]);
      }
      for (const auto& [j, tk] : m.touching[t.block]) {
        if (j < i) continue;
        M(i, j) += term_dot(m.rows[j][tk], T);
      }
    }
  }
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < i; ++j) M(i, j) = M(j, i);
  return M;
}

struct Direction {
  Blocks dX, dS;
  RVec dy;
  double dtau = 0.0;
  double dkappa = 0.0;
};

} // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0) || options.max_iter < 1) throw ConfigError("sdp::solve: bad options");

  const Model m = build_model(problem);
  const std::size_t nb = m.dims.size();
  const Eigen::Index rows = static_cast<Eigen::Index>(m.rows.size());

  Blocks X(nb), S(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    X[b] = RMat::Identity(m.dims[b], m.dims[b]);
    S[b] = RMat::Identity(m.dims[b], m.dims[b]);
  }
  RVec y = RVec::Zero(rows);
  double tau = 1.0;
  double kappa = 1.0;

  const double b_norm = m.b.norm();
  const double c_norm = norm(m.C);

  SdpSolution sol;
  std::vector<Scaling> sc(nb);
  int iter = 0;
  double pres = 0.0, dres = 0.0, gap = 0.0;

  // Near the accuracy floor the residuals can drift back up, so a stalled solve
  // reports the best iterate it saw rather than the last one.
  struct Snapshot {
    Blocks X;
    RVec y;
    double tau = 1.0, pres = 0.0, dres = 0.0, gap = 0.0;
    double merit = std::numeric_limits<double>::infinity();
  } best;

  for (;; ++iter) {
    const RVec AX = apply_A(m, X);
    const RVec rp = AX - m.b * tau;
    const Blocks Aty = apply_At(m, y);
    Blocks rd(nb);
    for (std::size_t b = 0; b < nb; ++b) rd[b] = m.C[b] * tau - Aty[b] - S[b];
    const double cx = dot(m.C, X);
    const double by = m.b.dot(y);
    const double rg = kappa + cx - by;
    const double mu = (dot(X, S) + tau * kappa) / (m.nu + 1.0);

    pres = rp.norm() / tau / (1.0 + b_norm);
    dres = norm(rd) / tau / (1.0 + c_norm);
    const double pobj = cx / tau;
    const double dobj = by / tau;
    gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    const double merit = std::max({pres, dres, gap});
    if (merit < best.merit) best = {X, y, tau, pres, dres, gap, merit};

    if (pres <= options.tol && dres <= options.tol && gap <= options.tol) {
      sol.status = SolveStatus::Optimal;
      break;
    }
    if (by > 0.0) {
      Blocks cert(nb);
      for (std::size_t b = 0; b < nb; ++b) cert[b] = Aty[b] + S[b];
      if (norm(cert) / by <= options.tol) {
        sol.status = SolveStatus::Infeasible;
        sol.certificate = Certificate::PrimalInfeasible;
        break;
      }
    }
    if (cx < 0.0 && AX.norm() / (-cx) <= options.tol) {
      sol.status = SolveStatus::Infeasible;
      sol.certificate = Certificate::DualInfeasible;
      break;
    }
    if (iter >= options.max_iter) {
      sol.status = SolveStatus::SlowProgress;
      break;
    }

    bool scaled_ok = true;
    for (std::size_t b = 0; b < nb && scaled_ok; ++b) scaled_ok = nt_scaling(X[b], S[b], sc[b]);
    if (!scaled_ok) {
      sol.status = SolveStatus::SlowProgress;
      break;
    }

    const RMat M = schur_complement(m, sc);
    Eigen::LLT<RMat> chol(M);
    Eigen::LDLT<RMat> ldlt;
    const bool use_llt = chol.info() == Eigen::Success;
    if (!use_llt) ldlt.compute(M);
    auto msolve = [&](const RVec& rhs) -> RVec { return use_llt ? RVec(chol.solve(rhs)) : RVec(ldlt.solve(rhs)); };

    Blocks WCW(nb), Wrd(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      WCW[b] = sc[b].W * m.C[b] * sc[b].W;
      Wrd[b] = sc[b].W * rd[b] * sc[b].W;
    }
    const RVec g = apply_A(m, WCW);
    const RVec q = msolve(g);
    const RVec pb = msolve(m.b);
    const RVec p2 = q + pb;
    const RVec AWrd = apply_A(m, Wrd);
    const double cWrd = dot(m.C, Wrd);
    // <C,WCW> - g'M^-1 g equals <R,WRW> with R = C - A'M^-1 g. The difference form
    // cancels catastrophically once W grows near the optimum, the residual form does not.
    const Blocks Atq = apply_At(m, q);
    double proj = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const RMat R = m.C[b] - Atq[b];
      proj += R.cwiseProduct(sc[b].W * R * sc[b].W).sum();
    }
    const double den = -(std::max(proj, 0.0) + m.b.dot(pb) + kappa / tau);

    auto direction = [&](double eta, const Blocks& Rc, double rtau) {
      Direction d;
      const RVec h1 = -eta * rp - apply_A(m, Rc) + eta * AWrd;
      const RVec p1 = msolve(h1);
      const double num = -eta * rg - rtau / tau - dot(m.C, Rc) + eta * cWrd - (g - m.b).dot(p1);
      d.dtau = num / den;
      d.dy = p1 + d.dtau * p2;
      const Blocks Atdy = apply_At(m, d.dy);
      d.dS.resize(nb);
      d.dX.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        d.dS[b] = m.C[b] * d.dtau - Atdy[b] + eta * rd[b];
        d.dX[b] = Rc[b] - sc[b].W * d.dS[b] * sc[b].W;
      }
      d.dkappa = (rtau - kappa * d.dtau) / tau;
      return d;
    };

    auto step_length = [&](const Direction& d, Blocks& dxs, Blocks& dss) {
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < nb; ++b) {
        dxs[b] = sc[b].Ginv * d.dX[b] * sc[b].Ginv.transpose();
        dss[b] = sc[b].G.transpose() * d.dS[b] * sc[b].G;
        alpha = std::min(alpha, max_step(sc[b].lambda, dxs[b]));
        alpha = std::min(alpha, max_step(sc[b].lambda, dss[b]));
      }
      if (d.dtau < 0.0) alpha = std::min(alpha, -tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa / d.dkappa);
      return alpha;
    };

    // Predictor.
    Blocks Rc(nb);
    for (std::size_t b = 0; b < nb; ++b) Rc[b] = -X[b];
    const Direction aff = direction(1.0, Rc, -tau * kappa);
    Blocks dxa(nb), dsa(nb);
    const double alpha_aff = std::min(1.0, step_length(aff, dxa, dsa));

    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b)
      mu_aff += (X[b] + alpha_aff * aff.dX[b]).cwiseProduct(S[b] + alpha_aff * aff.dS[b]).sum();
    mu_aff += (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa);
    mu_aff /= (m.nu + 1.0);
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t b = 0; b < nb; ++b) {
      const RVec& lam = sc[b].lambda;
      RMat r = -0.5 * (dxa[b] * dsa[b] + dsa[b] * dxa[b]);
      r.diagonal() += (sigma * mu) * RVec::Ones(lam.size()) - lam.cwiseProduct(lam);
      RMat z(lam.size(), lam.size());
      for (Eigen::Index j = 0; j < lam.size(); ++j)
        for (Eigen::Index i = 0; i < lam.size(); ++i) z(i, j) = 2.0 * r(i, j) / (lam[i] + lam[j]);
      Rc[b] = sc[b].G * z * sc[b].G.transpose();
    }
    const double rtau = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Direction dir = direction(1.0 - sigma, Rc, rtau);
    Blocks dxc(nb), dsc(nb);
    const double alpha = std::min(1.0, 0.98 * step_length(dir, dxc, dsc));
    bool finite = std::isfinite(alpha) && std::isfinite(dir.dtau) && std::isfinite(dir.dkappa) && dir.dy.allFinite();
    for (std::size_t b = 0; b < nb && finite; ++b) finite = dir.dX[b].allFinite() && dir.dS[b].allFinite();
    if (!finite || !(alpha > 1e-12)) {
      // the current iterate is kept, so the reported residuals stay consistent with it
      sol.status = SolveStatus::SlowProgress;
      break;
    }

    for (std::size_t b = 0; b < nb; ++b) {
      X[b] += alpha * dir.dX[b];
      S[b] += alpha * dir.dS[b];
      X[b] = 0.5 * (X[b] + X[b].transpose()).eval();
      S[b] = 0.5 * (S[b] + S[b].transpose()).eval();
    }
    y += alpha * dir.dy;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }

  if (sol.status == SolveStatus::SlowProgress && best.merit < std::max({pres, dres, gap})) {
    X = std::move(best.X);
    y = std::move(best.y);
    tau = best.tau;
    pres = best.pres;
    dres = best.dres;
    gap = best.gap;
  }
  sol.iterations = iter;
  sol.residuals = {pres, dres, gap};
  sol.blocks.resize(static_cast<std::size_t>(m.user_blocks));
  for (int b = 0; b < m.user_blocks; ++b) sol.blocks[b] = X[b] / tau;
  sol.duals.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) sol.duals[i] = -m.obj_scale * m.row_scale[i] * y[i] / tau;
  sol.objective = 0.0;
  for (int b = 0; b < m.user_blocks; ++b) sol.objective += problem.objective[b].cwiseProduct(sol.blocks[b]).sum();
  sol.dual_objective = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) sol.dual_objective += problem.constraints[i].rhs * sol.duals[i];
  return sol;
}

} // namespace dfrc::sdp
