#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace estimand {

struct ArmDefinition {
  std::string id;
  std::string label;
  // Months. Required for simulation arms; estimand definitions may omit it.
  std::optional<int> treatment_duration;

  bool operator==(const ArmDefinition&) const = default;
};

// Half-open interval [start, end) in months.
struct MonthWindow {
  double start = 0.0;
  double end = 0.0;

  bool operator==(const MonthWindow&) const = default;
};

struct IntercurrentEventCategory {
  std::string id;
  std::string description;
  std::vector<std::string> applicable_arms;
  std::optional<MonthWindow> window;

  bool operator==(const IntercurrentEventCategory&) const = default;
};

enum class StrategyKindTag { Composite, WhileOnTreatment, Other };

struct StrategyKind {
  StrategyKindTag tag = StrategyKindTag::Composite;
  std::string label;  // free text, meaningful for Other

  static StrategyKind composite() { return {StrategyKindTag::Composite, "composite"}; }
  static StrategyKind while_on_treatment() {
    return {StrategyKindTag::WhileOnTreatment, "while-on-treatment"};
  }
  static StrategyKind other(std::string text) { return {StrategyKindTag::Other, std::move(text)}; }

  bool operator==(const StrategyKind&) const = default;
};

struct IntercurrentEvent {
  std::string name;
  std::vector<IntercurrentEventCategory> categories;
  StrategyKind strategy;

  bool operator==(const IntercurrentEvent&) const = default;
};

struct EstimandSpec {
  std::vector<ArmDefinition> arms;
  std::string endpoint;
  std::vector<IntercurrentEvent> events;

  bool operator==(const EstimandSpec&) const = default;
};

enum class ExcessTiming { AfterMonth6 };

enum class TTestKind { Pooled, Welch };

/// Two-arm trial data-generating mechanism. The arm with the shorter
/// treatment duration is the treated arm (Z=1); the longer one is control.
struct ScenarioConfig {
  int n = 1000;
  std::vector<ArmDefinition> arms;
  double p_ya_control = 0.4;
  double p_ya_treat = 0.4;
  ExcessTiming p_ya_excess_timing = ExcessTiming::AfterMonth6;
  double p_disc_first = 0.15;
  double p_disc_second = 0.15;
  // P(Y_a = 1 | discontinued in months 6-12) in the control arm.
  double q612 = 0.4;
  double alpha = 0.05;
  int n_reps = 10000;
  std::uint64_t seed = 0;
  TTestKind t_test = TTestKind::Pooled;

  const ArmDefinition& treated_arm() const;
  const ArmDefinition& control_arm() const;

  bool operator==(const ScenarioConfig&) const = default;
};

// Both throw estimand::Error naming the offending field.
ScenarioConfig validate_scenario(const ScenarioConfig& config);
EstimandSpec validate_estimand(const EstimandSpec& spec);

// 6-month (treated) and 12-month (control) arms.
std::vector<ArmDefinition> default_duration_arms();

}  // namespace estimand
