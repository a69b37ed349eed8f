#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "estimand/trial_model.hpp"

namespace estimand {

struct RepResult {
  long long rep_index = 0;
  double theta_hat = 0.0;
  double p_value = 1.0;
  bool rejected = false;
  int excess_count = 0;  // control-arm excess events, out of n/2

  bool operator==(const RepResult&) const = default;
};

struct PerformanceSummary {
  long long n_reps = 0;
  double mean_rd = 0.0;
  double mcse_rd = 0.0;
  double rejection_fraction = 0.0;
  double mcse_rej = 0.0;
  double mean_excess = 0.0;
  double mcse_excess = 0.0;
  std::uint64_t seed = 0;
  std::string preset;

  bool operator==(const PerformanceSummary&) const = default;
};

struct SimulationResult {
  std::vector<RepResult> reps;
  PerformanceSummary summary;
};

/// One simulated trial. The replication draws from the substream
/// mix(master_seed, rep_index): cohort from mix(substream, 0), allocation
/// from mix(substream, 1).
RepResult run_rep(const ScenarioConfig& config, long long rep_index, std::uint64_t master_seed);

/// Hardware concurrency, capped by ESTIMAND_MAX_WORKERS when set.
unsigned default_worker_count();

/// Runs config.n_reps replications with config.seed as master seed.
/// `workers` = 0 selects default_worker_count(). Results are identical for
/// any worker count.
SimulationResult run_simulation(const ScenarioConfig& config, unsigned workers = 0,
                                const std::string& preset = "");

/// Aggregates replications in rep_index order, whatever order `reps` is in.
PerformanceSummary summarize(std::span<const RepResult> reps, std::uint64_t seed,
                             const std::string& preset);

/// ceil((sd(theta_hat) / target_mcse)^2) from `pilot_reps` replications,
/// at least 1.
long long estimate_required_reps(const ScenarioConfig& config, double target_mcse,
                                 int pilot_reps, unsigned workers = 0);

/// `rep_index,theta_hat,p_value,rejected,excess_count`; doubles are written
/// with 17 significant digits so that reading back is exact.
void write_reps_csv(std::ostream& out, std::span<const RepResult> reps);
std::vector<RepResult> read_reps_csv(std::istream& in);

}  // namespace estimand
