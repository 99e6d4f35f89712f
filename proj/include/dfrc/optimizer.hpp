#pragma once

// Alternating maximization of the secrecy rate: auxiliary refresh, transmit-side SDP,
// reflect-side SDP, repeated until the relative change falls below epsilon.
//
// Both sub-problem models are tangent to the secrecy rate at the current point but not
// below it, so every candidate is guarded: the transmit solution is approached along the
// lifted segment, and the reflect side is retried with a growing proximal weight when the
// unweighted relaxation yields no admissible phase vector.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfrc/beamformer.hpp"
#include "dfrc/irs_design.hpp"

namespace dfrc {

struct RunConfig {
  double P_R = 1.0;                        ///< watts
  double gamma_th = 0.07943282347242814;   ///< linear (-11 dB)
  double epsilon = 0.01;                   ///< relative change
  int t_max = 20;
  std::optional<double> omega;
  std::uint64_t seed = 0;                  ///< drives the initial phases
  sdp::SolverOptions solver;
  bool verify_solves = true;
  std::vector<double> proximal_weights{0.0, 1.0, 10.0, 100.0}; ///< multiples of the model scale

  void validate() const;
};

enum class TermReason { Converged, IterCap, Stalled };
const char* to_string(TermReason reason);

struct SolveStats {
  bool attempted = false;
  sdp::SolveStatus status = sdp::SolveStatus::SlowProgress;
  int iterations = 0;
  sdp::Residuals residuals;
  bool verified = false;         ///< independent residual check passed
  double verify_residual = 0.0;  ///< max of the verify report entries
};

struct IterationRecord {
  int t = 0;
  double secrecy_rate = 0.0;
  double user_rate = 0.0;
  double ed_rate = 0.0;
  double radar_snr = 0.0;
  double power_used = 0.0;
  AuxiliaryState aux;
  SolveStats sp1;
  std::vector<SolveStats> sp2; ///< one entry per proximal attempt
  bool beam_accepted = false;
  bool phi_accepted = false;
  PhaseStatus phase_status = PhaseStatus::RepairFailed;
  std::optional<TermReason> term_reason; ///< set on the last record only
};

struct RunResult {
  std::vector<IterationRecord> trace; ///< trace[0] is the initial point
  DesignState final_state;
  TermReason reason = TermReason::IterCap;
  int init_draws = 0;
};

/// Metric fields of a record (t = 0, solver stats empty).
IterationRecord evaluate_state(const DesignState& d, const Scenario& s);

/// Random phases, matched-filter w with omega P_R (0.5 P_R without a split) and
/// isotropic AN with the rest. Phases are re-drawn up to 50 times until the radar
/// SNR threshold holds; then InitializationInfeasible is thrown.
DesignState initial_state(const Scenario& s, const RunConfig& cfg, int* draws = nullptr);

RunResult run(const Scenario& s, const RunConfig& cfg);
RunResult run_from(const Scenario& s, const RunConfig& cfg, const DesignState& start);

/// CSV with header t,secrecy_rate,user_rate,ed_rate,radar_snr,power_used,term_reason.
std::string trace_to_csv(const std::vector<IterationRecord>& trace);

} // namespace dfrc
