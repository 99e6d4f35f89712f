#pragma once

#include "dfrc/scenario.hpp"

namespace dfrc {

/// Decision variables: information precoder w, AN precoder W_n and IRS phases.
/// The transmitted signal is x = w s + W_n n with unit-variance s and n ~ CN(0, I).
struct DesignState {
  CVec w;
  CMat W_n;
  PhaseVector phi;

  double power() const { return w.squaredNorm() + W_n.squaredNorm(); }
};

// All rates are in nats.

/// |c^T w|^2 / (||c^T W_n||^2 + sigma2)
double link_sinr(const CVec& c, const CVec& w, const CMat& W_n, double sigma2);
double link_rate(const CVec& c, const CVec& w, const CMat& W_n, double sigma2);

/// tr(C_T (w w^H + W_n W_n^H) C_T^H) / sigma2_r
double radar_snr(const CVec& w, const CMat& W_n, const CMat& cascade, double sigma2_r);

double radar_snr(const DesignState& d, const Scenario& s);
double user_rate(const DesignState& d, const Scenario& s);
double ed_rate(const DesignState& d, const Scenario& s);
double secrecy_rate(const DesignState& d, const Scenario& s);

} // namespace dfrc
