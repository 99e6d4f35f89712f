#include <algorithm>
#include <cmath>

#include "dfrc/sdp.hpp"

namespace dfrc::sdp {

int SdpProblem::add_block(int dim) {
  block_dims.push_back(dim);
  objective.push_back(RMat::Zero(dim, dim));
  return static_cast<int>(block_dims.size()) - 1;
}

void SdpProblem::validate() const {
  const int nb = num_blocks();
  if (static_cast<int>(objective.size()) != nb)
    throw ConfigError("sdp: one objective matrix per block required");
  auto check_sym = [&](const RMat& m, int block, const std::string& what) {
    if (block < 0 || block >= nb) throw ConfigError("sdp: " + what + " refers to unknown block");
    const int d = block_dims[block];
    if (m.rows() != d || m.cols() != d) throw ConfigError("sdp: " + what + " has wrong dimension");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ConfigError("sdp: " + what + " is not symmetric");
  };
  for (int b = 0; b < nb; ++b) {
    if (block_dims[b] < 1) throw ConfigError("sdp: block dimensions must be >= 1");
    check_sym(objective[b], b, "objective block " + std::to_string(b));
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].terms.empty())
      throw ConfigError("sdp: constraint " + std::to_string(i) + " has no terms");
    for (const auto& t : constraints[i].terms)
      check_sym(t.coeff, t.block, "constraint " + std::to_string(i));
  }
  for (const auto& [name, v] : views) {
    if (v.block < 0 || v.block >= nb) throw ConfigError("sdp: view `" + name + "` has bad block");
    const int d = v.complex ? block_dims[v.block] / 2 : block_dims[v.block];
    if (v.row < 0 || v.col < 0 || v.row + v.rows > d || v.col + v.cols > d)
      throw ConfigError("sdp: view `" + name + "` out of range");
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
  case SolveStatus::Optimal: return "Optimal";
  case SolveStatus::Infeasible: return "Infeasible";
  case SolveStatus::SlowProgress: return "SlowProgress";
  }
  return "?";
}

namespace {

double min_eigenvalue(const RMat& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<RMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

} // namespace

VerifyReport verify(const SdpSolution& solution, const SdpProblem& problem, double tol) {
  VerifyReport rep;
  const int nb = problem.num_blocks();
  if (static_cast<int>(solution.blocks.size()) != nb ||
      solution.duals.size() != static_cast<Eigen::Index>(problem.constraints.size())) {
    rep.issues.push_back("solution shape does not match problem");
    return rep;
  }

  double x_norm = 0.0;
  for (const auto& x : solution.blocks) x_norm += x.squaredNorm();
  x_norm = std::sqrt(x_norm);

  for (int b = 0; b < nb; ++b) {
    const RMat& x = solution.blocks[b];
    const RMat sym = 0.5 * (x + x.transpose());
    const double asym = (x - x.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, sym.norm());
    const double v = std::max(std::max(0.0, -min_eigenvalue(sym)), asym) / scale;
    rep.cone_violation = std::max(rep.cone_violation, v);
    if (v > tol) rep.issues.push_back("block " + std::to_string(b) + " not PSD (" + std::to_string(v) + ")");
  }

  double c_norm = 0.0;
  for (const auto& c : problem.objective) c_norm += c.squaredNorm();
  c_norm = std::sqrt(c_norm);

  double pobj = 0.0;
  for (int b = 0; b < nb; ++b) pobj += problem.objective[b].cwiseProduct(solution.blocks[b]).sum();

  std::vector<RMat> z(nb);
  for (int b = 0; b < nb; ++b) z[b] = -problem.objective[b];
  double dobj = 0.0;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& con = problem.constraints[i];
    const double y = solution.duals[static_cast<Eigen::Index>(i)];
    double lhs = 0.0;
    double a_norm = 0.0;
    for (const auto& t : con.terms) {
      lhs += t.coeff.cwiseProduct(solution.blocks[t.block]).sum();
      a_norm += t.coeff.squaredNorm();
      z[t.block] += y * t.coeff;
    }
    a_norm = std::sqrt(a_norm);
    dobj += y * con.rhs;

    double viol = 0.0;
    double sign_viol = 0.0;
    switch (con.sense) {
    case Sense::Equal: viol = std::abs(lhs - con.rhs); break;
    case Sense::LessEqual:
      viol = std::max(0.0, lhs - con.rhs);
      sign_viol = std::max(0.0, -y);
      break;
    case Sense::GreaterEqual:
      viol = std::max(0.0, con.rhs - lhs);
      sign_viol = std::max(0.0, y);
      break;
    }
    const double rel = viol / (a_norm * x_norm + std::abs(con.rhs) + 1e-300);
    rep.primal_violation = std::max(rep.primal_violation, rel);
    if (rel > tol) rep.issues.push_back("constraint " + std::to_string(i) + " violated (" + std::to_string(rel) + ")");
    const double srel = sign_viol / (1.0 + c_norm);
    rep.dual_violation = std::max(rep.dual_violation, srel);
    if (srel > tol) rep.issues.push_back("dual " + std::to_string(i) + " has wrong sign");
  }

  for (int b = 0; b < nb; ++b) {
    const double v = std::max(0.0, -min_eigenvalue(0.5 * (z[b] + z[b].transpose()))) / (1.0 + c_norm);
    rep.dual_violation = std::max(rep.dual_violation, v);
    if (v > tol) rep.issues.push_back("dual slack of block " + std::to_string(b) + " not PSD");
  }

  rep.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  if (rep.gap > tol) rep.issues.push_back("duality gap " + std::to_string(rep.gap));
  rep.ok = rep.issues.empty();
  return rep;
}

RMat realify(const CMat& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (h.rows() != h.cols() || (h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("realify: input is not Hermitian");
  const Eigen::Index n = h.rows();
  RMat r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = h.real();
  r.topRightCorner(n, n) = -h.imag();
  r.bottomLeftCorner(n, n) = h.imag();
  r.bottomRightCorner(n, n) = h.real();
  return r;
}

CMat derealify(const RMat& y) {
  const Eigen::Index n = y.rows() / 2;
  const RMat re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const RMat im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  CMat out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

int HermitianProblem::add_block(int dim) {
  block_dims.push_back(dim);
  objective.push_back(CMat::Zero(dim, dim));
  return static_cast<int>(block_dims.size()) - 1;
}

SdpProblem realify(const HermitianProblem& problem) {
  SdpProblem out;
  for (std::size_t b = 0; b < problem.block_dims.size(); ++b) {
    out.add_block(2 * problem.block_dims[b]);
    out.objective[b] = 0.5 * realify(problem.objective[b]);
  }
  for (const auto& con : problem.constraints) {
    Constraint rc;
    rc.sense = con.sense;
    rc.rhs = con.rhs;
    for (const auto& t : con.terms) rc.terms.push_back({t.block, 0.5 * realify(t.coeff)});
    out.constraints.push_back(std::move(rc));
  }
  for (auto [name, v] : problem.views) {
    v.complex = true;
    out.views[name] = v;
  }
  out.validate();
  return out;
}

CMat complex_view(const SdpSolution& solution, const SdpProblem& problem, const std::string& name) {
  const auto it = problem.views.find(name);
  if (it == problem.views.end()) throw ConfigError("sdp: no view named `" + name + "`");
  const View& v = it->second;
  const RMat& blk = solution.blocks.at(v.block);
  if (v.complex) return derealify(blk).block(v.row, v.col, v.rows, v.cols);
  return blk.block(v.row, v.col, v.rows, v.cols).cast<cplx>();
}

RMat real_view(const SdpSolution& solution, const SdpProblem& problem, const std::string& name) {
  const auto it = problem.views.find(name);
  if (it == problem.views.end()) throw ConfigError("sdp: no view named `" + name + "`");
  const View& v = it->second;
  if (v.complex) throw ConfigError("sdp: view `" + name + "` is complex");
  return solution.blocks.at(v.block).block(v.row, v.col, v.rows, v.cols);
}

} // namespace dfrc::sdp
