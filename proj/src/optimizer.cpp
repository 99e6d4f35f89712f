#include "dfrc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kv.hpp"

namespace dfrc {

void RunConfig::validate() const {
  if (!(P_R > 0.0)) throw ConfigError("run config: P_R must be > 0");
  if (!(gamma_th >= 0.0)) throw ConfigError("run config: gamma_th must be >= 0");
  if (!(epsilon > 0.0)) throw ConfigError("run config: epsilon must be > 0");
  if (t_max < 1) throw ConfigError("run config: t_max must be >= 1");
  if (omega && !(*omega >= 0.0 && *omega <= 1.0)) throw ConfigError("run config: omega must lie in [0, 1]");
  if (!(solver.tol >= 1e-10 && solver.tol <= 1e-4)) throw ConfigError("run config: solver tol must lie in [1e-10, 1e-4]");
  if (solver.max_iter < 1) throw ConfigError("run config: solver max_iter must be >= 1");
  if (proximal_weights.empty()) throw ConfigError("run config: at least one proximal weight is required");
  for (double w : proximal_weights)
    if (!(w >= 0.0)) throw ConfigError("run config: proximal weights must be >= 0");
}

const char* to_string(TermReason reason) {
  switch (reason) {
  case TermReason::Converged: return "Converged";
  case TermReason::IterCap: return "IterCap";
  case TermReason::Stalled: return "Stalled";
  }
  return "?";
}

IterationRecord evaluate_state(const DesignState& d, const Scenario& s) {
  IterationRecord r;
  r.user_rate = user_rate(d, s);
  r.ed_rate = ed_rate(d, s);
  r.secrecy_rate = r.user_rate - r.ed_rate;
  r.radar_snr = radar_snr(d, s);
  r.power_used = d.power();
  return r;
}

namespace {

bool feasible(const DesignState& d, const Scenario& s, const RunConfig& cfg) {
  return d.power() <= cfg.P_R * (1.0 + 1e-6) && radar_snr(d, s) >= cfg.gamma_th * (1.0 - 1e-6);
}

SolveStats stats_of(const sdp::SdpSolution& sol, const sdp::SdpProblem& p, bool verify) {
  SolveStats st;
  st.attempted = true;
  st.status = sol.status;
  st.iterations = sol.iterations;
  st.residuals = sol.residuals;
  if (verify && sol.status == sdp::SolveStatus::Optimal) {
    const sdp::VerifyReport rep = sdp::verify(sol, p, 1e-6);
    st.verified = rep.ok;
    st.verify_residual = std::max({rep.primal_violation, rep.cone_violation, rep.dual_violation, rep.gap});
  }
  return st;
}

} // namespace

DesignState initial_state(const Scenario& s, const RunConfig& cfg, int* draws) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const double omega = cfg.omega.value_or(0.5);
  const int nt = s.n_tx();
  const int n = s.n_irs();

  for (int k = 1; k <= 50; ++k) {
    RVec ang(n);
    for (int i = 0; i < n; ++i) ang[i] = angle(rng);
    DesignState d;
    d.phi = PhaseVector::from_angles(ang);
    const CVec c_u = effective_user_channel(d.phi, s);
    const double cn = c_u.norm();
    d.w = cn > 0.0 ? CVec(std::sqrt(omega * cfg.P_R) * c_u.conjugate() / cn) : CVec::Zero(nt);
    d.W_n = std::sqrt((1.0 - omega) * cfg.P_R / nt) * CMat::Identity(nt, nt);
    if (radar_snr(d, s) >= cfg.gamma_th) {
      if (draws) *draws = k;
      return d;
    }
  }
  throw InitializationInfeasible("no initial phase draw meets the radar SNR threshold after 50 attempts");
}

RunResult run(const Scenario& s, const RunConfig& cfg) {
  int draws = 0;
  const DesignState start = initial_state(s, cfg, &draws);
  RunResult r = run_from(s, cfg, start);
  r.init_draws = draws;
  return r;
}

RunResult run_from(const Scenario& s, const RunConfig& cfg, const DesignState& start) {
  cfg.validate();
  s.validate();
  if (start.w.size() != s.n_tx() || start.W_n.rows() != s.n_tx() || start.phi.size() != s.n_irs())
    throw ConfigError("run: starting design has wrong dimensions");

  RunResult result;
  DesignState d = start;
  result.trace.push_back(evaluate_state(d, s));
  int failures = 0;

  for (int t = 1;; ++t) {
    const double before = result.trace.back().secrecy_rate;
    IterationRecord rec;
    rec.aux = update_auxiliaries(d, s);

    // Transmit side.
    const CVec c_u = effective_user_channel(d.phi, s);
    const CVec c_te = effective_ed_channel(d.phi, s);
    const TransformConstants k = transform_constants(rec.aux, c_u, c_te, s.sigma2_u, s.sigma2_te);
    const Subproblem1Data data =
        make_subproblem1_data(k, radar_cascade_channel(d.phi, s), s.sigma2_r, cfg.P_R, cfg.gamma_th, cfg.omega);
    const sdp::SdpProblem p1 = build_subproblem1(data);
    const Subproblem1Result s1 = solve_subproblem1(p1, data, cfg.solver);
    rec.sp1 = stats_of(s1.solution, p1, cfg.verify_solves);
    DesignState next;
    if (s1.solution.status == sdp::SolveStatus::Optimal) {
      // Backtrack along the lifted segment; keep the best point that does not lose secrecy.
      double best = before;
      double step = 1.0;
      for (int k = 0; k < 20; ++k, step *= 0.5) {
        const DesignState cand = blend_beam(d, s1, step, !cfg.omega);
        if (!feasible(cand, s, cfg)) continue;
        const double value = secrecy_rate(cand, s);
        if (value >= best) {
          best = value;
          next = cand;
          rec.beam_accepted = true;
        }
      }
      if (rec.beam_accepted) d = next;
    }

    // Reflect side, auxiliaries refreshed at the accepted precoders.
    const AuxiliaryState aux2 = update_auxiliaries(d, s);
    const PhiObjective obj = build_phi_objective(d, aux2, s);
    const SnrSurrogate sur = build_snr_surrogate(d.phi, d, s, cfg.gamma_th);
    PhaseCheck check;
    check.feasible = [&](const PhaseVector& phi) {
      DesignState c = d;
      c.phi = phi;
      return radar_snr(c, s) >= cfg.gamma_th * (1.0 - 1e-6);
    };
    check.objective = [&](const PhaseVector& phi) {
      DesignState c = d;
      c.phi = phi;
      return secrecy_rate(c, s);
    };
    const double current = secrecy_rate(d, s);
    const double scale = std::max(obj.Q.cwiseAbs().maxCoeff() * obj.Q.rows(), obj.lin.cwiseAbs().maxCoeff());
    rec.phase_status = PhaseStatus::RepairFailed;
    for (double weight : cfg.proximal_weights) {
      const PhiObjective prox = with_proximal(obj, d.phi, weight * scale);
      const sdp::SdpProblem p2 = build_subproblem2(prox, sur);
      const sdp::SdpSolution sol2 = sdp::solve(p2, cfg.solver);
      rec.sp2.push_back(stats_of(sol2, p2, cfg.verify_solves));
      if (sol2.status != sdp::SolveStatus::Optimal) continue;
      const PhaseExtraction ex = extract_phases(relaxed_phases(sol2, p2), d.phi, check);
      rec.phase_status = ex.status;
      if (ex.status != PhaseStatus::RepairFailed && check.objective(ex.phi) > current) {
        d.phi = ex.phi;
        rec.phi_accepted = true;
        break;
      }
    }
    failures = rec.phase_status == PhaseStatus::RepairFailed ? failures + 1 : 0;

    const IterationRecord m = evaluate_state(d, s);
    rec.t = t;
    rec.secrecy_rate = m.secrecy_rate;
    rec.user_rate = m.user_rate;
    rec.ed_rate = m.ed_rate;
    rec.radar_snr = m.radar_snr;
    rec.power_used = m.power_used;
    result.trace.push_back(rec);

    if (std::isinf(cfg.epsilon) || std::abs(m.secrecy_rate - before) <= cfg.epsilon * std::abs(before)) {
      result.reason = TermReason::Converged;
      break;
    }
    if (failures >= 2) {
      result.reason = TermReason::Stalled;
      break;
    }
    if (t >= cfg.t_max) {
      result.reason = TermReason::IterCap;
      break;
    }
  }
  result.trace.back().term_reason = result.reason;
  result.final_state = d;
  return result;
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace) {
  using detail::format_double;
  std::ostringstream out;
  out << "t,secrecy_rate,user_rate,ed_rate,radar_snr,power_used,term_reason\n";
  for (const auto& r : trace) {
    out << r.t << ',' << format_double(r.secrecy_rate) << ',' << format_double(r.user_rate) << ','
        << format_double(r.ed_rate) << ',' << format_double(r.radar_snr) << ',' << format_double(r.power_used)
        << ',' << (r.term_reason ? to_string(*r.term_reason) : "") << '\n';
  }
  return out.str();
}

} // namespace dfrc
