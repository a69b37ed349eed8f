#pragma once

#include <vector>

#include "estimand/dgm.hpp"
#include "estimand/trial_model.hpp"

namespace estimand {

/// One cell of the per-arm joint law of (clinical outcome, discontinuation
/// timing as observed under that arm).
struct JointAtom {
  bool ya = false;
  DiscCategory disc = DiscCategory::None;
  double probability = 0.0;
};

struct JointDistribution {
  std::vector<JointAtom> control;  // disc in {None, First, Second}
  std::vector<JointAtom> treated;  // months 6-12 folded into None
};

/// Exact enumeration of the data-generating law. Throws MarginalInfeasible
/// under the same conditions as cohort generation.
JointDistribution joint_distribution(const ScenarioConfig& config);

struct OracleSummary {
  double p_event_treat = 0.0;
  double p_event_control = 0.0;
  double true_rd = 0.0;
  double expected_excess = 0.0;  // among the n/2 control patients
  double se_asymptotic = 0.0;
  double asymptotic_rejection = 0.0;
};

/// Population composite-event probabilities per arm, the risk difference,
/// expected excess count and normal-approximation power of the two-sided
/// level-alpha test:
///   Phi(-z - theta/se) + Phi(-z + theta/se),
///   se = sqrt(p_t(1-p_t)/(n/2) + p_c(1-p_c)/(n/2)).
OracleSummary summarize_population(const ScenarioConfig& config);

}  // namespace estimand
