#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfrc/experiments.hpp"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  std::optional<long long> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::optional<std::string> omega;
  std::optional<std::string> grid;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value settings file")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "override one setting, key=value (repeatable)");
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_option("--seed", c.seed, "base seed");
  cmd->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

dfrc::Settings load(const Common& c) {
  dfrc::Settings s = dfrc::default_settings();
  if (!c.config.empty()) dfrc::apply_config_file(s, c.config);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw dfrc::ConfigError("--set expects key=value, got `" + kv + "`");
    dfrc::apply_setting(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) dfrc::apply_setting(s, "seed", std::to_string(*c.seed));
  if (c.trials) dfrc::apply_setting(s, "trials", std::to_string(*c.trials));
  if (c.threads) dfrc::apply_setting(s, "threads", std::to_string(*c.threads));
  if (c.omega) dfrc::apply_setting(s, "omega", *c.omega);
  if (c.grid) dfrc::apply_setting(s, "omega_grid", *c.grid);
  s.validate();
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write `" + path + "`");
  f << text;
}

int report_infeasible(int count, int total) {
  if (count == 0) return 0;
  std::cerr << count << " of " << total << " trials had no feasible initial point\n";
  return 3;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure IRS-assisted DFRC beamforming: optimizer and experiment runner"};
  app.require_subcommand(1);

  Common run_opts, conv_opts, sweep_opts, dump_opts;

  auto* run_cmd = app.add_subcommand("run", "optimize one channel realization and write its trace");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--omega", run_opts.omega, "information power fraction, or `none`");

  auto* conv_cmd = app.add_subcommand("convergence", "mean secrecy rate per iteration over many trials");
  add_common(conv_cmd, conv_opts);
  conv_cmd->add_option("--trials", conv_opts.trials, "number of channel realizations");
  conv_cmd->add_option("--omega", conv_opts.omega, "information power fraction, or `none`");

  auto* sweep_cmd = app.add_subcommand("omega-sweep", "mean rates against the information power fraction");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--trials", sweep_opts.trials, "channel realizations per grid point");
  sweep_cmd->add_option("--grid", sweep_opts.grid, "start:step:stop or a comma list");

  auto* dump_cmd = app.add_subcommand("dump-scenario", "write the channel realization for a seed");
  add_common(dump_cmd, dump_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      const auto s = load(run_opts);
      dfrc::RunConfig cfg = s.run;
      cfg.seed = s.seed;
      try {
        const auto result = dfrc::run(dfrc::trial_scenario(s, s.seed), cfg);
        emit(run_opts.out, dfrc::trace_to_csv(result.trace));
        std::cerr << "terminated: " << dfrc::to_string(result.reason) << " after " << result.trace.size() - 1
                  << " iterations, secrecy rate " << result.trace.back().secrecy_rate << " nats/s/Hz\n";
      } catch (const dfrc::InitializationInfeasible& e) {
        std::cerr << e.what() << '\n';
        return 3;
      }
      return 0;
    }
    if (*conv_cmd) {
      dfrc::ExperimentSpec spec{dfrc::ExperimentKind::Convergence, load(conv_opts)};
      const auto table = dfrc::run_convergence(spec);
      emit(conv_opts.out, dfrc::convergence_to_csv(table));
      return report_infeasible(table.infeasible, spec.settings.trials);
    }
    if (*sweep_cmd) {
      dfrc::ExperimentSpec spec{dfrc::ExperimentKind::OmegaSweep, load(sweep_opts)};
      const auto table = dfrc::run_omega_sweep(spec);
      emit(sweep_opts.out, dfrc::sweep_to_csv(table));
      int infeasible = 0;
      for (const auto& r : table.rows) infeasible += r.infeasible;
      return report_infeasible(infeasible, spec.settings.trials * static_cast<int>(table.rows.size()));
    }
    if (*dump_cmd) {
      const auto s = load(dump_opts);
      emit(dump_opts.out, dfrc::scenario_to_text(dfrc::trial_scenario(s, s.seed)));
      return 0;
    }
  } catch (const dfrc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
