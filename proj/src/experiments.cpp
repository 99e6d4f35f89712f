#include "dfrc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "kv.hpp"

namespace dfrc {

void ExperimentSpec::validate() const {
  settings.validate();
  if (kind == ExperimentKind::OmegaSweep && settings.omega_grid.empty())
    throw ConfigError("omega sweep needs a non-empty grid");
}

Scenario trial_scenario(const Settings& settings, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return build_scenario(rng, settings.scenario);
}

namespace {

template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(n, 1));
  std::atomic<int> next{0};
  auto body = [&] {
    for (int i = next++; i < n; i = next++) fn(i);
  };
  if (workers == 1) {
    body();
    return;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < workers; ++k) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

} // namespace

std::vector<Trial> run_trials(const Settings& settings, std::optional<double> omega) {
  settings.validate();
  std::vector<Trial> trials(static_cast<std::size_t>(settings.trials));
  parallel_for(settings.trials, settings.threads, [&](int i) {
    Trial& trial = trials[static_cast<std::size_t>(i)];
    trial.seed = settings.seed + static_cast<std::uint64_t>(i);
    RunConfig cfg = settings.run;
    cfg.omega = omega;
    cfg.seed = trial.seed;
    try {
      trial.result = run(trial_scenario(settings, trial.seed), cfg);
    } catch (const InitializationInfeasible& e) {
      trial.error = e.what();
    }
  });
  return trials;
}

ConvergenceTable summarize_convergence(std::vector<Trial> trials) {
  ConvergenceTable table;
  std::size_t length = 0;
  for (const auto& trial : trials) {
    if (trial.result) length = std::max(length, trial.result->trace.size());
    else ++table.infeasible;
  }
  for (std::size_t t = 0; t < length; ++t) {
    ConvergenceRow row;
    row.t = static_cast<int>(t);
    std::vector<double> values;
    for (const auto& trial : trials) {
      if (!trial.result) continue;
      const auto& trace = trial.result->trace;
      if (t < trace.size()) ++row.n_active;
      values.push_back(trace[std::min(t, trace.size() - 1)].secrecy_rate);
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean_secrecy = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean_secrecy) * (v - row.mean_secrecy);
    row.var_secrecy = ss / static_cast<double>(values.size());
    table.rows.push_back(row);
  }
  table.trials = std::move(trials);
  return table;
}

ConvergenceTable run_convergence(const ExperimentSpec& spec) {
  spec.validate();
  return summarize_convergence(run_trials(spec.settings, spec.settings.run.omega));
}

SweepRow summarize_sweep_point(double omega, const std::vector<Trial>& trials) {
  SweepRow row;
  row.omega = omega;
  std::vector<double> s;
  double ru = 0.0;
  double rte = 0.0;
  for (const auto& trial : trials) {
    if (!trial.result) {
      ++row.infeasible;
      continue;
    }
    const auto& last = trial.result->trace.back();
    ru += last.user_rate;
    rte += last.ed_rate;
    s.push_back(last.secrecy_rate);
  }
  row.feasible = static_cast<int>(s.size());
  if (s.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_Ru = row.mean_Rte = row.mean_secrecy = row.stderr_secrecy = nan;
    return row;
  }
  const double n = static_cast<double>(s.size());
  row.mean_Ru = ru / n;
  row.mean_Rte = rte / n;
  double sum = 0.0;
  for (double v : s) sum += v;
  row.mean_secrecy = sum / n;
  if (s.size() > 1) {
    double ss = 0.0;
    for (double v : s) ss += (v - row.mean_secrecy) * (v - row.mean_secrecy);
    row.stderr_secrecy = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return row;
}

SweepTable run_omega_sweep(const ExperimentSpec& spec) {
  spec.validate();
  SweepTable table;
  for (double omega : spec.settings.omega_grid)
    table.rows.push_back(summarize_sweep_point(omega, run_trials(spec.settings, omega)));
  return table;
}

std::string convergence_to_csv(const ConvergenceTable& table) {
  std::ostringstream out;
  out << "t,mean_secrecy,var_secrecy,n_active\n";
  for (const auto& r : table.rows)
    out << r.t << ',' << detail::format_double(r.mean_secrecy) << ',' << detail::format_double(r.var_secrecy)
        << ',' << r.n_active << '\n';
  return out.str();
}

std::string sweep_to_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "omega,mean_Ru,mean_Rte,mean_secrecy,stderr_secrecy\n";
  for (const auto& r : table.rows)
    out << detail::format_double(r.omega) << ',' << detail::format_double(r.mean_Ru) << ','
        << detail::format_double(r.mean_Rte) << ',' << detail::format_double(r.mean_secrecy) << ','
        << detail::format_double(r.stderr_secrecy) << '\n';
  return out.str();
}

} // namespace dfrc
