#include "estimand/trial_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "estimand/error.hpp"

namespace estimand {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::PeriodProbabilitiesExceedOne: return "PeriodProbabilitiesExceedOne";
    case ErrorCode::OddSampleSize: return "OddSampleSize";
    case ErrorCode::InvalidArm: return "InvalidArm";
    case ErrorCode::ArmDurationsNotOrdered: return "ArmDurationsNotOrdered";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnknownArmReference: return "UnknownArmReference";
    case ErrorCode::DuplicateCategoryId: return "DuplicateCategoryId";
    case ErrorCode::DuplicateArmId: return "DuplicateArmId";
    case ErrorCode::InvalidCategory: return "InvalidCategory";
    case ErrorCode::TooFewArms: return "TooFewArms";
    case ErrorCode::MarginalInfeasible: return "MarginalInfeasible";
    case ErrorCode::OddCohortSize: return "OddCohortSize";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::EmptyArm: return "EmptyArm";
    case ErrorCode::NonPositiveDf: return "NonPositiveDf";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
  }
  return "Unknown";
}

namespace {

void check_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::ProbabilityOutOfRange, field,
                std::string(field) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

void check_arm(const ArmDefinition& arm, bool duration_required) {
  if (arm.id.empty()) {
    throw Error(ErrorCode::InvalidArm, "arms", "arm id must be non-empty");
  }
  if (duration_required && !arm.treatment_duration) {
    throw Error(ErrorCode::InvalidArm, arm.id, "arm '" + arm.id + "' needs a treatment_duration");
  }
  if (arm.treatment_duration && *arm.treatment_duration <= 0) {
    throw Error(ErrorCode::InvalidArm, arm.id,
                "arm '" + arm.id + "' treatment_duration must be positive");
  }
}

}  // namespace

const ArmDefinition& ScenarioConfig::treated_arm() const {
  return arms.at(0).treatment_duration < arms.at(1).treatment_duration ? arms[0] : arms[1];
}

const ArmDefinition& ScenarioConfig::control_arm() const {
  return arms.at(0).treatment_duration < arms.at(1).treatment_duration ? arms[1] : arms[0];
}

std::vector<ArmDefinition> default_duration_arms() {
  return {{"6m", "6-month regimen", 6}, {"12m", "12-month regimen", 12}};
}

ScenarioConfig validate_scenario(const ScenarioConfig& config) {
  if (config.n <= 0) {
    throw Error(ErrorCode::InvalidParameter, "n", "n must be positive");
  }
  if (config.n % 2 != 0) {
    throw Error(ErrorCode::OddSampleSize, "n",
                "n must be even for exact 1:1 allocation, got " + std::to_string(config.n));
  }
  if (config.arms.size() != 2) {
    throw Error(ErrorCode::InvalidArm, "arms", "a scenario needs exactly two arms");
  }
  for (const auto& arm : config.arms) check_arm(arm, true);
  if (config.arms[0].id == config.arms[1].id) {
    throw Error(ErrorCode::DuplicateArmId, config.arms[0].id, "arm ids must be unique");
  }
  if (config.arms[0].treatment_duration == config.arms[1].treatment_duration) {
    throw Error(ErrorCode::ArmDurationsNotOrdered, "arms",
                "arms need different treatment durations (shorter arm is treated)");
  }

  check_probability(config.p_ya_control, "p_ya_control");
  check_probability(config.p_ya_treat, "p_ya_treat");
  check_probability(config.p_disc_first, "p_disc_first");
  check_probability(config.p_disc_second, "p_disc_second");
  check_probability(config.q612, "q612");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorCode::ProbabilityOutOfRange, "alpha", "alpha must lie in (0, 1)");
  }
  // Small slack so 0.15 + 0.85 style inputs are not rejected by rounding.
  if (config.p_disc_first + config.p_disc_second > 1.0 + 1e-12) {
    throw Error(ErrorCode::PeriodProbabilitiesExceedOne, "p_disc_second",
                "p_disc_first + p_disc_second must not exceed 1");
  }
  if (config.n_reps < 1) {
    throw Error(ErrorCode::InvalidParameter, "n_reps", "n_reps must be at least 1");
  }
  return config;
}

EstimandSpec validate_estimand(const EstimandSpec& spec) {
  if (spec.arms.size() < 2) {
    throw Error(ErrorCode::TooFewArms, "arms", "an estimand needs at least two arms");
  }
  std::set<std::string> arm_ids;
  for (const auto& arm : spec.arms) {
    check_arm(arm, false);
    if (!arm_ids.insert(arm.id).second) {
      throw Error(ErrorCode::DuplicateArmId, arm.id, "duplicate arm id '" + arm.id + "'");
    }
  }

  for (const auto& event : spec.events) {
    std::set<std::string> category_ids;
    for (const auto& category : event.categories) {
      if (!category_ids.insert(category.id).second) {
        throw Error(ErrorCode::DuplicateCategoryId, category.id,
                    "event '" + event.name + "' declares category '" + category.id + "' twice");
      }
      if (category.applicable_arms.empty()) {
        throw Error(ErrorCode::InvalidCategory, category.id,
                    "category '" + category.id + "' applies to no arm");
      }
      for (const auto& arm : category.applicable_arms) {
        if (!arm_ids.contains(arm)) {
          throw Error(ErrorCode::UnknownArmReference, arm,
                      "category '" + category.id + "' references undeclared arm '" + arm + "'");
        }
      }
      if (category.window) {
        const auto& w = *category.window;
        if (!(w.start >= 0.0 && w.start < w.end)) {
          throw Error(ErrorCode::InvalidCategory, category.id,
                      "category '" + category.id + "' window must satisfy 0 <= start < end");
        }
      }
    }
  }
  return spec;
}

}  // namespace estimand
