#pragma once

#include <random>

#include "dfrc/metrics.hpp"

namespace testing {

using namespace dfrc;

inline ScenarioConfig small_config(int n_tx = 4, int n_rx = 3, int rows = 2, int cols = 3) {
  ScenarioConfig c;
  c.geometry.n_tx = n_tx;
  c.geometry.n_rx = n_rx;
  c.geometry.irs_rows = rows;
  c.geometry.irs_cols = cols;
  return c;
}

inline Scenario random_scenario(std::uint64_t seed, const ScenarioConfig& c = small_config()) {
  std::mt19937_64 rng(seed);
  return build_scenario(rng, c);
}

inline CVec random_cvec(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v;
}

inline CMat random_cmat(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd;
  CMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

inline PhaseVector random_phases(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  RVec a(n);
  for (auto& x : a) x = u(rng);
  return PhaseVector::from_angles(a);
}

/// Random design with total power `power`.
inline DesignState random_design(std::mt19937_64& rng, const Scenario& s, double power = 1.0) {
  DesignState d;
  d.w = random_cvec(rng, s.n_tx());
  d.W_n = random_cmat(rng, s.n_tx(), s.n_tx());
  const double scale = std::sqrt(power / d.power());
  d.w *= scale;
  d.W_n *= scale;
  d.phi = random_phases(rng, s.n_irs());
  return d;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace testing
