#pragma once

// Reflect-side sub-problem: quadratic model of the transformed objective in the IRS
// phases, a tangent minorant of the quartic radar SNR, the relaxed program and the
// recovery of a unit-modulus phase vector.

#include <functional>

#include "dfrc/fractional.hpp"
#include "dfrc/sdp.hpp"

namespace dfrc {

/// f(phi) = const_term + Re(phi^T lin) + phi^T Q phi^*, Q Hermitian.
struct PhiObjective {
  CMat Q;
  CVec lin;
  double const_term = 0.0;

  double value(const CVec& phi) const;
};

/// f(phi) - rho ||phi - anchor||^2 restricted to unit-modulus phi: a linear term
/// 2 rho Re(phi^T anchor^*) plus the constant -2 rho N.
PhiObjective with_proximal(const PhiObjective& obj, const CVec& anchor, double rho);

/// Rewrites linearized_objective(d with phi, aux, s) as a quadratic in phi for the
/// fixed precoders d.w and d.W_n.
PhiObjective build_phi_objective(const DesignState& d, const AuxiliaryState& aux, const Scenario& s);

/// Z = [H_dl R H_dl^H]^T kron (H_ul^H H_ul) with R = w w^H + W_n W_n^H, so that
/// radar_snr = |beta|^2 / sigma2_r * u^H Z u with u = vec(diag(phi) a a^T diag(phi)).
CMat vectorized_snr_matrix(const DesignState& d, const Scenario& s);
/// Column-major vec(diag(phi) a a^T diag(phi)).
CVec vectorized_phase_matrix(const CVec& phi, const CVec& a);

/// gamma~(phi) = Re(phi^H L2 phi^* + phi^T L3 phi) - offset, tangent to the radar SNR at
/// phi_t and below it everywhere.
struct SnrSurrogate {
  CMat L2;
  CMat L3;
  double offset = 0.0;           ///< radar SNR at the expansion point
  double gamma_th_shifted = 0.0; ///< gamma_th + offset
  double imag_residual = 0.0;    ///< |Im| of the pair sum at phi_t, for diagnostics

  double quadratic(const CVec& phi) const; ///< Re(phi^H L2 phi^* + phi^T L3 phi)
  double value(const CVec& phi) const { return quadratic(phi) - offset; }
};

SnrSurrogate build_snr_surrogate(const PhaseVector& phi_t, const DesignState& d, const Scenario& s,
                                 double gamma_th);

/// Relaxed program over the real lift x = [Re phi; Im phi] with one PSD block
/// [[X, x], [x^T, 1]] of size 2N+1; R1 = P X P^H and R2 = P X P^T with P = [I, iI].
/// Rows: [R1]_nn = 1, |[R2]_nn| <= 1 (as 2x2 PSD blocks), the surrogate SNR row, and
/// the corner. Real view "x".
sdp::SdpProblem build_subproblem2(const PhiObjective& obj, const SnrSurrogate& sur);

/// Relaxed phi = x[0:N] + i x[N:2N] read from a solved sub-problem 2.
CVec relaxed_phases(const sdp::SdpSolution& solution, const sdp::SdpProblem& problem);

enum class PhaseStatus { Projected, Repaired, RepairFailed };

const char* to_string(PhaseStatus status);

struct PhaseCheck {
  std::function<bool(const PhaseVector&)> feasible;
  std::function<double(const PhaseVector&)> objective;
};

struct PhaseExtraction {
  PhaseVector phi;
  PhaseStatus status = PhaseStatus::RepairFailed;
  int evaluations = 0;
};

/// Projects `relaxed` onto the unit circle. The projection is kept when it is feasible
/// and its objective is no worse than at phi_t (minus 1e-6). Otherwise each phase is
/// rotated from phi_t toward the projection by a fraction found with 20 bisection
/// steps; the best admissible point wins. With none, phi_t is returned as RepairFailed.
PhaseExtraction extract_phases(const CVec& relaxed, const PhaseVector& phi_t, const PhaseCheck& check);

/// Phases rotated from `from` toward `to` by fraction s along the shorter arc.
PhaseVector interpolate_phases(const PhaseVector& from, const PhaseVector& to, double s);

} // namespace dfrc
