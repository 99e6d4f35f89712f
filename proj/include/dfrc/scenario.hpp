#pragma once

#include <random>
#include <string>

#include "dfrc/types.hpp"

namespace dfrc {

/// Transmit/receive ULAs at the DFRC platform plus the planar IRS grid.
struct ArrayGeometry {
  int n_tx = 16;
  int n_rx = 16;
  int irs_rows = 5;
  int irs_cols = 5;
  double spacing = 0.5; ///< inter-element distance in wavelengths

  int n_irs() const { return irs_rows * irs_cols; }
  void validate() const;
};

/// Unit-modulus IRS reflection coefficients (the diagonal of the IRS matrix).
class PhaseVector {
public:
  PhaseVector() = default;
  /// Throws ConfigError if any entry deviates from unit modulus by more than 1e-9.
  explicit PhaseVector(CVec values);

  static PhaseVector from_angles(const RVec& angles);
  /// Normalizes each entry to unit modulus; zero entries map to phase 0.
  static PhaseVector project(const CVec& relaxed);

  const CVec& values() const { return values_; }
  RVec angles() const;
  Eigen::Index size() const { return values_.size(); }
  operator const CVec&() const { return values_; }

private:
  CVec values_;
};

/// Parameters of the synthetic channel generator (linear units).
struct ScenarioConfig {
  ArrayGeometry geometry;
  double rician_k = 1.0;   ///< K-factor, linear
  double beta_abs = 0.01;  ///< |beta|, amplitude
  double beta_h = 1.0;     ///< DFRC-IRS path loss
  double sigma2_r = 1e-3;  ///< watts
  double sigma2_u = 1e-3;
  double sigma2_te = 1e-3;

  void validate() const;
};

/// One channel realization: everything the optimizer treats as known.
struct Scenario {
  ArrayGeometry geometry;
  CVec g;      ///< DFRC -> user, length n_tx
  CVec f;      ///< IRS -> user, length N
  CMat H_dl;   ///< DFRC -> IRS, N x n_tx
  CMat H_ul;   ///< IRS -> DFRC, n_rx x N
  cplx beta{0.0, 0.0};
  double beta_h = 1.0;
  double psi_a = 0.0;
  double psi_e = 0.0;
  double sigma2_r = 1e-3;
  double sigma2_u = 1e-3;
  double sigma2_te = 1e-3;

  int n_tx() const { return geometry.n_tx; }
  int n_rx() const { return geometry.n_rx; }
  int n_irs() const { return geometry.n_irs(); }

  /// IRS steering vector toward the target, a_I(psi_a, psi_e).
  CVec irs_steering() const;
  void validate() const;
};

CVec ula_steering(double angle, int n, double spacing);

/// Row-major UPA response; element (p, q) has phase
/// 2*pi*spacing*(p*sin(psi_e) + q*cos(psi_e)*sin(psi_a)).
CVec upa_steering(double psi_a, double psi_e, const ArrayGeometry& geometry);

/// sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * CN(0, 1) entries.
CMat sample_rician(std::mt19937_64& rng, int rows, int cols, double k_factor, const CMat& los);

Scenario build_scenario(std::mt19937_64& rng, const ScenarioConfig& config);

/// D = beta_H^{1/2} diag(f) H_dl, so that c_u^T = g^T + phi^T D.
CMat user_factor(const Scenario& s);
/// E = beta^{1/2} diag(a_I) H_dl, so that c_te^T = phi^T E.
CMat ed_factor(const Scenario& s);

CVec effective_user_channel(const CVec& phi, const Scenario& s);
CVec effective_ed_channel(const CVec& phi, const Scenario& s);
/// C_T = beta H_ul diag(phi) a_I a_I^T diag(phi) H_dl.
CMat radar_cascade_channel(const CVec& phi, const Scenario& s);

std::string scenario_to_text(const Scenario& s);
Scenario scenario_from_text(const std::string& text);

} // namespace dfrc
