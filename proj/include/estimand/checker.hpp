#pragma once

#include <map>
#include <string>
#include <vector>

#include "estimand/trial_model.hpp"

namespace estimand {

enum class VerdictStatus { Causal, NonCausal, Unassessed };

std::string_view to_string(VerdictStatus status);

/// A category that folds into the outcome of some arms but not others.
struct Offender {
  std::string event;
  std::string category_id;
  StrategyKind strategy;
  std::vector<std::string> arms_lacking;  // declaration order of spec.arms

  bool operator==(const Offender&) const = default;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::Causal;
  std::vector<Offender> offending;
  std::map<std::string, std::string> rendered_definitions;  // arm id -> text
};

/// Flags every composite or while-on-treatment category whose applicable
/// arms are a proper subset of the trial's arms. Expects a validated spec.
Verdict check_estimand(const EstimandSpec& spec);

/// Outcome definition each arm ends up with once intercurrent-event
/// categories are folded into the endpoint, in declaration order:
/// composite categories append " or <description>", while-on-treatment
/// categories append ", truncated at <description>". Events with any
/// other strategy do not change the outcome definition.
std::map<std::string, std::string> render_outcome_definitions(const EstimandSpec& spec);

/// One line per offender, e.g. for lint output.
std::string describe(const Offender& offender);

}  // namespace estimand
