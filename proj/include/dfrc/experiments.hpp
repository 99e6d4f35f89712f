#pragma once

// Monte-Carlo batches over channel realizations. Trial i uses seed seed_base + i for both
// the channel draw and the initial phases, so a batch is fully determined by its settings.

#include <optional>
#include <string>
#include <vector>

#include "dfrc/config.hpp"

namespace dfrc {

enum class ExperimentKind { Convergence, OmegaSweep, SingleRun };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Convergence;
  Settings settings = default_settings();

  void validate() const;
};

struct Trial {
  std::uint64_t seed = 0;
  std::optional<RunResult> result; ///< empty when the initial point was infeasible
  std::string error;
};

/// Runs settings.trials independent optimizations with the given power split, in parallel.
/// Results are ordered by trial index.
std::vector<Trial> run_trials(const Settings& settings, std::optional<double> omega);

Scenario trial_scenario(const Settings& settings, std::uint64_t seed);

struct ConvergenceRow {
  int t = 0;
  double mean_secrecy = 0.0;
  double var_secrecy = 0.0; ///< population variance
  int n_active = 0;         ///< runs that had not terminated before t
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<Trial> trials;
  int infeasible = 0;
};

/// Finished runs carry their final value forward so every row averages all feasible trials.
ConvergenceTable summarize_convergence(std::vector<Trial> trials);
ConvergenceTable run_convergence(const ExperimentSpec& spec);

struct SweepRow {
  double omega = 0.0;
  double mean_Ru = 0.0;
  double mean_Rte = 0.0;
  double mean_secrecy = 0.0;
  double stderr_secrecy = 0.0; ///< sample standard deviation / sqrt(n)
  int feasible = 0;
  int infeasible = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

SweepRow summarize_sweep_point(double omega, const std::vector<Trial>& trials);
SweepTable run_omega_sweep(const ExperimentSpec& spec);

std::string convergence_to_csv(const ConvergenceTable& table);
std::string sweep_to_csv(const SweepTable& table);

} // namespace dfrc
