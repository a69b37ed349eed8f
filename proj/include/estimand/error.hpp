#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace estimand {

enum class ErrorCode {
  ProbabilityOutOfRange,
  PeriodProbabilitiesExceedOne,
  OddSampleSize,
  InvalidArm,
  ArmDurationsNotOrdered,
  InvalidParameter,
  UnknownArmReference,
  DuplicateCategoryId,
  DuplicateArmId,
  InvalidCategory,
  TooFewArms,
  MarginalInfeasible,
  OddCohortSize,
  EmptyCohort,
  EmptyArm,
  NonPositiveDf,
  DomainError,
  TooFewValues,
  FileNotFound,
  MalformedJson,
  SchemaViolation,
  UnknownPreset,
  MalformedCsv,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `field()` names the offending
// config key, arm id or category id when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace estimand
