#pragma once

// Transmit-side sub-problem: for fixed IRS phases, choose the information precoder w and
// the AN covariance by a semidefinite program over (w, R_w, R_Wn).

#include <optional>

#include "dfrc/fractional.hpp"
#include "dfrc/sdp.hpp"

namespace dfrc {

struct Subproblem1Data {
  CVec v;          ///< linear coefficient of Re(v^T w)
  CMat M;          ///< Hermitian quadratic coefficient
  CMat C_T;        ///< radar cascade channel, n_rx x n_tx
  double sigma2_r = 1e-3;
  double P_R = 1.0;      ///< watts
  double gamma_th = 0.0; ///< linear
  std::optional<double> omega;

  void validate() const;
};

Subproblem1Data make_subproblem1_data(const TransformConstants& k, const CMat& cascade, double sigma2_r,
                                      double P_R, double gamma_th, std::optional<double> omega);

/// maximize Re(v^T w) + tr(M (R_w + R_Wn))
/// s.t. tr(R_w + R_Wn) <= P_R, tr(C_T^H C_T (R_w + R_Wn)) / sigma2_r >= gamma_th,
///      [[R_w, w], [w^H, 1]] PSD, R_Wn PSD, and the omega trace caps when omega is set.
/// The Hermitian blocks are realified. Views: "w", "R_w", "R_Wn" (a view is omitted when
/// omega pins its block to zero).
sdp::SdpProblem build_subproblem1(const Subproblem1Data& data);

struct Subproblem1Result {
  sdp::SdpSolution solution;
  CVec w;
  CMat R_w;
  CMat R_Wn;
  CMat W_n;          ///< AN precoder recovered from the covariance
  double value = 0.0; ///< Re(v^T w) + tr(M (R_w + R_Wn)) at the returned point
};

/// Solves the program and recovers (w, W_n). Without an omega split the slack
/// R_w - w w^H is folded into the AN covariance (same objective, power and SNR);
/// with a split it is dropped so the caps stay satisfied.
/// Throws ConfigError if `problem` does not carry the expected views.
Subproblem1Result solve_subproblem1(const sdp::SdpProblem& problem, const Subproblem1Data& data,
                                    const sdp::SolverOptions& options = {});

/// Point at fraction s on the segment from the current precoders to a sub-problem 1
/// solution, taken in the lifted variables (w, R_w, R_Wn) where the program is linear:
/// w(s) = (1-s) w0 + s w1, R_w(s) = (1-s) w0 w0^H + s R_w1, R_Wn(s) likewise. Power and
/// radar SNR constraints hold along the whole segment. The slack R_w(s) - w(s) w(s)^H is
/// folded into the AN when `fold_slack` is set.
DesignState blend_beam(const DesignState& from, const Subproblem1Result& to, double s, bool fold_slack);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues above
/// -1e-6 ||R|| are clipped to zero; below that NotPsdError is thrown.
CMat psd_sqrt(const CMat& R);

} // namespace dfrc
