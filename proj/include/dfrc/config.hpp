#pragma once

// Flat `key = value` configuration. Logarithmic keys (suffix _db / _dbm) are converted
// to linear units here and nowhere else.
//
//   n_tx, n_rx, irs_rows, irs_cols, spacing     array geometry
//   rician_k_db                                 Rician K-factor
//   beta_db                                     |beta|^2 of the target reflection
//   beta_h                                      DFRC-IRS path loss (linear)
//   sigma2_r_dbm, sigma2_u_dbm, sigma2_te_dbm   noise powers
//   p_r_dbm                                     power budget
//   gamma_th_db                                 radar SNR threshold
//   epsilon_db                                  relative-change tolerance
//   t_max, omega (number or `none`), seed, trials, threads
//   omega_grid                                  `start:step:stop` or comma list
//   solver_tol, solver_max_iter

#include <cstdint>
#include <string>
#include <vector>

#include "dfrc/optimizer.hpp"

namespace dfrc {

struct Settings {
  ScenarioConfig scenario;
  RunConfig run;
  int trials = 30;
  std::uint64_t seed = 1;
  int threads = 0; ///< 0: one per hardware thread
  std::vector<double> omega_grid;

  void validate() const;
};

/// Reference configuration defaults (omega grid 0.1:0.05:1.0).
Settings default_settings();

/// Applies one setting; throws ConfigError for unknown keys or malformed values.
void apply_setting(Settings& settings, const std::string& key, const std::string& value);
void apply_config_text(Settings& settings, const std::string& text);
void apply_config_file(Settings& settings, const std::string& path);

/// `start:step:stop` (inclusive, tolerant to rounding) or `a,b,c`.
std::vector<double> parse_grid(const std::string& text);

} // namespace dfrc
