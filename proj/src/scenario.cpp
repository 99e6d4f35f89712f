#include "dfrc/scenario.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "kv.hpp"

namespace dfrc {

void ArrayGeometry::validate() const {
  if (n_tx < 1 || n_rx < 1 || irs_rows < 1 || irs_cols < 1)
    throw ConfigError("array geometry: all element counts must be >= 1");
  if (!(spacing > 0.0)) throw ConfigError("array geometry: spacing must be > 0");
}

PhaseVector::PhaseVector(CVec values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (std::abs(std::abs(values_[i]) - 1.0) > 1e-9)
      throw ConfigError("phase vector entry " + std::to_string(i) + " is not unit modulus");
  }
}

PhaseVector PhaseVector::from_angles(const RVec& angles) {
  CVec v(angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) v[i] = std::polar(1.0, angles[i]);
  return PhaseVector(std::move(v));
}

PhaseVector PhaseVector::project(const CVec& relaxed) {
  CVec v(relaxed.size());
  for (Eigen::Index i = 0; i < relaxed.size(); ++i) {
    const double mag = std::abs(relaxed[i]);
    v[i] = mag > 0.0 ? relaxed[i] / mag : cplx(1.0, 0.0);
  }
  return PhaseVector(std::move(v));
}

RVec PhaseVector::angles() const {
  RVec a(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) a[i] = std::arg(values_[i]);
  return a;
}

void ScenarioConfig::validate() const {
  geometry.validate();
  if (!(rician_k >= 0.0)) throw ConfigError("rician K-factor must be >= 0");
  if (!(beta_abs > 0.0)) throw ConfigError("|beta| must be > 0");
  if (!(beta_h >= 0.0)) throw ConfigError("beta_H must be >= 0");
  if (!(sigma2_r > 0.0 && sigma2_u > 0.0 && sigma2_te > 0.0))
    throw ConfigError("noise powers must be > 0");
}

CVec Scenario::irs_steering() const { return upa_steering(psi_a, psi_e, geometry); }

void Scenario::validate() const {
  geometry.validate();
  const int n = n_irs();
  if (g.size() != n_tx() || f.size() != n || H_dl.rows() != n || H_dl.cols() != n_tx() ||
      H_ul.rows() != n_rx() || H_ul.cols() != n)
    throw ConfigError("scenario: channel dimensions inconsistent with geometry");
  if (!(sigma2_r > 0.0 && sigma2_u > 0.0 && sigma2_te > 0.0))
    throw ConfigError("scenario: noise powers must be > 0");
  if (!(std::abs(beta) > 0.0)) throw ConfigError("scenario: |beta| must be > 0");
  if (!(beta_h >= 0.0)) throw ConfigError("scenario: beta_H must be >= 0");
}

CVec ula_steering(double angle, int n, double spacing) {
  CVec a(n);
  const double step = 2.0 * kPi * spacing * std::sin(angle);
  for (int k = 0; k < n; ++k) a[k] = std::polar(1.0, step * k);
  return a;
}

CVec upa_steering(double psi_a, double psi_e, const ArrayGeometry& geometry) {
  const int rows = geometry.irs_rows;
  const int cols = geometry.irs_cols;
  const double row_step = 2.0 * kPi * geometry.spacing * std::sin(psi_e);
  const double col_step = 2.0 * kPi * geometry.spacing * std::cos(psi_e) * std::sin(psi_a);
  CVec a(rows * cols);
  for (int p = 0; p < rows; ++p)
    for (int q = 0; q < cols; ++q) a[p * cols + q] = std::polar(1.0, row_step * p + col_step * q);
  return a;
}

CMat sample_rician(std::mt19937_64& rng, int rows, int cols, double k_factor, const CMat& los) {
  if (los.rows() != rows || los.cols() != cols)
    throw ConfigError("sample_rician: LOS component has wrong shape");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double los_gain = std::sqrt(k_factor / (1.0 + k_factor));
  const double nlos_gain = std::sqrt(1.0 / (1.0 + k_factor));
  CMat h(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(r, c) = los_gain * los(r, c) + nlos_gain * cplx(re, im);
    }
  }
  return h;
}

Scenario build_scenario(std::mt19937_64& rng, const ScenarioConfig& config) {
  config.validate();
  const ArrayGeometry& geo = config.geometry;
  std::uniform_real_distribution<double> half_plane(-kPi / 2.0, kPi / 2.0);
  std::uniform_real_distribution<double> full_circle(0.0, 2.0 * kPi);

  Scenario s;
  s.geometry = geo;
  s.beta_h = config.beta_h;
  s.sigma2_r = config.sigma2_r;
  s.sigma2_u = config.sigma2_u;
  s.sigma2_te = config.sigma2_te;

  // Draw order is part of the reproducibility contract.
  s.psi_a = half_plane(rng);
  s.psi_e = half_plane(rng);
  s.beta = std::polar(config.beta_abs, full_circle(rng));

  const double g_angle = half_plane(rng);
  const double f_az = half_plane(rng);
  const double f_el = half_plane(rng);
  const double dl_tx = half_plane(rng);
  const double dl_az = half_plane(rng);
  const double dl_el = half_plane(rng);
  const double ul_rx = half_plane(rng);
  const double ul_az = half_plane(rng);
  const double ul_el = half_plane(rng);

  const int n = geo.n_irs();
  const CMat g_los = ula_steering(g_angle, geo.n_tx, geo.spacing);
  const CMat f_los = upa_steering(f_az, f_el, geo);
  const CMat dl_los =
      upa_steering(dl_az, dl_el, geo) * ula_steering(dl_tx, geo.n_tx, geo.spacing).transpose();
  const CMat ul_los =
      ula_steering(ul_rx, geo.n_rx, geo.spacing) * upa_steering(ul_az, ul_el, geo).transpose();

  s.g = sample_rician(rng, geo.n_tx, 1, config.rician_k, g_los).col(0);
  s.f = sample_rician(rng, n, 1, config.rician_k, f_los).col(0);
  s.H_dl = sample_rician(rng, n, geo.n_tx, config.rician_k, dl_los);
  s.H_ul = sample_rician(rng, geo.n_rx, n, config.rician_k, ul_los);
  s.validate();
  return s;
}

CMat user_factor(const Scenario& s) {
  return std::sqrt(s.beta_h) * (s.f.asDiagonal() * s.H_dl);
}

CMat ed_factor(const Scenario& s) {
  return std::sqrt(s.beta) * (s.irs_steering().asDiagonal() * s.H_dl);
}

CVec effective_user_channel(const CVec& phi, const Scenario& s) {
  // c_u^T = g^T + beta_H^{1/2} f^T Phi H_dl
  const Eigen::RowVectorXcd row =
      s.g.transpose() + std::sqrt(s.beta_h) * (s.f.transpose() * phi.asDiagonal() * s.H_dl);
  return row.transpose();
}

CVec effective_ed_channel(const CVec& phi, const Scenario& s) {
  const CVec a = s.irs_steering();
  const Eigen::RowVectorXcd row = std::sqrt(s.beta) * (a.transpose() * phi.asDiagonal() * s.H_dl);
  return row.transpose();
}

CMat radar_cascade_channel(const CVec& phi, const Scenario& s) {
  const CVec a = s.irs_steering();
  const CVec left = s.H_ul * phi.asDiagonal() * a;                           // n_rx
  const Eigen::RowVectorXcd right = a.transpose() * phi.asDiagonal() * s.H_dl; // 1 x n_tx
  return s.beta * (left * right);
}

namespace {

std::string join_complex(const CMat& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!out.empty()) out += ' ';
      out += detail::format_complex(m(r, c));
    }
  }
  return out;
}

CMat to_matrix(const std::string& key, const std::vector<cplx>& values, int rows, int cols) {
  if (static_cast<int>(values.size()) != rows * cols)
    throw ConfigError("scenario text: `" + key + "` has " + std::to_string(values.size()) +
                      " entries, expected " + std::to_string(rows * cols));
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = values[r * cols + c];
  return m;
}

} // namespace

std::string scenario_to_text(const Scenario& s) {
  using detail::format_double;
  std::ostringstream out;
  out << "n_tx = " << s.geometry.n_tx << '\n'
      << "n_rx = " << s.geometry.n_rx << '\n'
      << "irs_rows = " << s.geometry.irs_rows << '\n'
      << "irs_cols = " << s.geometry.irs_cols << '\n'
      << "spacing = " << format_double(s.geometry.spacing) << '\n'
      << "beta = " << detail::format_complex(s.beta) << '\n'
      << "beta_h = " << format_double(s.beta_h) << '\n'
      << "psi_a = " << format_double(s.psi_a) << '\n'
      << "psi_e = " << format_double(s.psi_e) << '\n'
      << "sigma2_r = " << format_double(s.sigma2_r) << '\n'
      << "sigma2_u = " << format_double(s.sigma2_u) << '\n'
      << "sigma2_te = " << format_double(s.sigma2_te) << '\n'
      << "g = " << join_complex(s.g) << '\n'
      << "f = " << join_complex(s.f) << '\n'
      << "H_dl = " << join_complex(s.H_dl) << '\n'
      << "H_ul = " << join_complex(s.H_ul) << '\n';
  return out.str();
}

Scenario scenario_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (auto& [k, v] : detail::parse_key_values(text)) kv[k] = v;
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("scenario text: missing key `" + key + "`");
    return it->second;
  };

  Scenario s;
  s.geometry.n_tx = detail::parse_int("n_tx", need("n_tx"));
  s.geometry.n_rx = detail::parse_int("n_rx", need("n_rx"));
  s.geometry.irs_rows = detail::parse_int("irs_rows", need("irs_rows"));
  s.geometry.irs_cols = detail::parse_int("irs_cols", need("irs_cols"));
  s.geometry.spacing = detail::parse_double("spacing", need("spacing"));
  s.geometry.validate();
  s.beta = detail::parse_complex("beta", need("beta"));
  s.beta_h = detail::parse_double("beta_h", need("beta_h"));
  s.psi_a = detail::parse_double("psi_a", need("psi_a"));
  s.psi_e = detail::parse_double("psi_e", need("psi_e"));
  s.sigma2_r = detail::parse_double("sigma2_r", need("sigma2_r"));
  s.sigma2_u = detail::parse_double("sigma2_u", need("sigma2_u"));
  s.sigma2_te = detail::parse_double("sigma2_te", need("sigma2_te"));

  const int n = s.geometry.n_irs();
  const int nt = s.geometry.n_tx;
  const int nr = s.geometry.n_rx;
  s.g = to_matrix("g", detail::parse_complex_list("g", need("g")), nt, 1).col(0);
  s.f = to_matrix("f", detail::parse_complex_list("f", need("f")), n, 1).col(0);
  s.H_dl = to_matrix("H_dl", detail::parse_complex_list("H_dl", need("H_dl")), n, nt);
  s.H_ul = to_matrix("H_ul", detail::parse_complex_list("H_ul", need("H_ul")), nr, n);
  s.validate();
  return s;
}

} // namespace dfrc
