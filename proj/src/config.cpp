#include "dfrc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfrc/units.hpp"
#include "kv.hpp"

namespace dfrc {

void Settings::validate() const {
  scenario.validate();
  run.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  for (double w : omega_grid)
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("omega grid values must lie in [0, 1]");
}

Settings default_settings() {
  Settings s;
  s.scenario.rician_k = units::db_to_linear(0.0);
  s.scenario.beta_abs = units::db_to_amplitude(-40.0);
  s.scenario.sigma2_r = units::dbm_to_watts(0.0);
  s.scenario.sigma2_u = units::dbm_to_watts(0.0);
  s.scenario.sigma2_te = units::dbm_to_watts(0.0);
  s.run.P_R = units::dbm_to_watts(30.0);
  s.run.gamma_th = units::db_to_linear(-11.0);
  s.run.epsilon = units::db_to_linear(-20.0);
  s.run.t_max = 20;
  s.omega_grid = parse_grid("0.1:0.05:1.0");
  return s;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string p;
    while (std::getline(in, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("grid `" + text + "`: expected start:step:stop");
    const double start = detail::parse_double("grid", parts[0]);
    const double step = detail::parse_double("grid", parts[1]);
    const double stop = detail::parse_double("grid", parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("grid `" + text + "`: need step > 0 and stop >= start");
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
  } else {
    std::stringstream in(text);
    std::string p;
    while (std::getline(in, p, ',')) {
      const auto b = p.find_first_not_of(" \t");
      const auto e = p.find_last_not_of(" \t");
      if (b == std::string::npos) throw ConfigError("grid `" + text + "`: empty entry");
      out.push_back(detail::parse_double("grid", p.substr(b, e - b + 1)));
    }
  }
  if (out.empty()) throw ConfigError("grid `" + text + "` is empty");
  return out;
}

void apply_setting(Settings& s, const std::string& key, const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  auto& geo = s.scenario.geometry;
  if (key == "n_tx") geo.n_tx = parse_int(key, value);
  else if (key == "n_rx") geo.n_rx = parse_int(key, value);
  else if (key == "irs_rows") geo.irs_rows = parse_int(key, value);
  else if (key == "irs_cols") geo.irs_cols = parse_int(key, value);
  else if (key == "spacing") geo.spacing = parse_double(key, value);
  else if (key == "rician_k_db") s.scenario.rician_k = units::db_to_linear(parse_double(key, value));
  else if (key == "beta_db") s.scenario.beta_abs = units::db_to_amplitude(parse_double(key, value));
  else if (key == "beta_h") s.scenario.beta_h = parse_double(key, value);
  else if (key == "sigma2_r_dbm") s.scenario.sigma2_r = units::dbm_to_watts(parse_double(key, value));
  else if (key == "sigma2_u_dbm") s.scenario.sigma2_u = units::dbm_to_watts(parse_double(key, value));
  else if (key == "sigma2_te_dbm") s.scenario.sigma2_te = units::dbm_to_watts(parse_double(key, value));
  else if (key == "p_r_dbm") s.run.P_R = units::dbm_to_watts(parse_double(key, value));
  else if (key == "gamma_th_db") s.run.gamma_th = units::db_to_linear(parse_double(key, value));
  else if (key == "epsilon_db") s.run.epsilon = units::db_to_linear(parse_double(key, value));
  else if (key == "t_max") s.run.t_max = parse_int(key, value);
  else if (key == "omega") {
    if (value == "none") s.run.omega.reset();
    else s.run.omega = parse_double(key, value);
  } else if (key == "seed") {
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
      throw ConfigError("seed: `" + value + "` is not a non-negative integer");
    s.seed = v;
  } else if (key == "trials") s.trials = parse_int(key, value);
  else if (key == "threads") s.threads = parse_int(key, value);
  else if (key == "omega_grid") s.omega_grid = parse_grid(value);
  else if (key == "solver_tol") s.run.solver.tol = parse_double(key, value);
  else if (key == "solver_max_iter") s.run.solver.max_iter = parse_int(key, value);
  else throw ConfigError("unknown setting `" + key + "`");
}

void apply_config_text(Settings& settings, const std::string& text) {
  for (const auto& [k, v] : detail::parse_key_values(text)) apply_setting(settings, k, v);
}

void apply_config_file(Settings& settings, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(settings, buf.str());
}

} // namespace dfrc
