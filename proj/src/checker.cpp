#include "estimand/checker.hpp"

#include <algorithm>

namespace estimand {

namespace {

bool folds_into_outcome(const StrategyKind& strategy) {
  return strategy.tag == StrategyKindTag::Composite ||
         strategy.tag == StrategyKindTag::WhileOnTreatment;
}

bool applies_to(const IntercurrentEventCategory& category, const std::string& arm_id) {
  return std::find(category.applicable_arms.begin(), category.applicable_arms.end(), arm_id) !=
         category.applicable_arms.end();
}

}  // namespace

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Causal: return "Causal";
    case VerdictStatus::NonCausal: return "NonCausal";
    case VerdictStatus::Unassessed: return "Unassessed";
  }
  return "Unassessed";
}

std::map<std::string, std::string> render_outcome_definitions(const EstimandSpec& spec) {
  std::map<std::string, std::string> rendered;
  for (const auto& arm : spec.arms) {
    std::string text = spec.endpoint;
    for (const auto& event : spec.events) {
      if (!folds_into_outcome(event.strategy)) continue;
      for (const auto& category : event.categories) {
        if (!applies_to(category, arm.id)) continue;
        text += event.strategy.tag == StrategyKindTag::Composite ? " or " : ", truncated at ";
        text += category.description;
      }
    }
    rendered.emplace(arm.id, std::move(text));
  }
  return rendered;
}

Verdict check_estimand(const EstimandSpec& spec) {
  Verdict verdict;
  bool any_assessed = false;

  for (const auto& event : spec.events) {
    if (!folds_into_outcome(event.strategy)) continue;
    any_assessed = true;
    for (const auto& category : event.categories) {
      Offender offender{event.name, category.id, event.strategy, {}};
      for (const auto& arm : spec.arms) {
        if (!applies_to(category, arm.id)) offender.arms_lacking.push_back(arm.id);
      }
      if (!offender.arms_lacking.empty()) verdict.offending.push_back(std::move(offender));
    }
  }

  if (!verdict.offending.empty()) {
    verdict.status = VerdictStatus::NonCausal;
  } else if (!any_assessed && !spec.events.empty()) {
    verdict.status = VerdictStatus::Unassessed;
  } else {
    verdict.status = VerdictStatus::Causal;
  }
  verdict.rendered_definitions = render_outcome_definitions(spec);
  return verdict;
}

std::string describe(const Offender& offender) {
  std::string lacking;
  for (const auto& arm : offender.arms_lacking) {
    if (!lacking.empty()) lacking += ", ";
    lacking += arm;
  }
  return offender.strategy.label + " strategy for '" + offender.event + "': category '" +
         offender.category_id + "' does not apply to arm(s) " + lacking +
         ", so the outcome is defined differently across arms";
}

}  // namespace estimand
