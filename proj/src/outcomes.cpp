#include "estimand/outcomes.hpp"

#include "estimand/error.hpp"

namespace estimand {

ComponentBundle components_under(const PatientRecord& patient, Arm arm) {
  return {patient.ya(arm), patient.yb_first(arm), patient.yb_second(arm)};
}

bool potential_outcome(const PatientRecord& patient, Arm arm) {
  return composite_outcome(components_under(patient, arm));
}

bool excess_indicator(const PatientRecord& patient) {
  if (patient.assigned_arm != Arm::Control) return false;
  const ComponentBundle b = components_under(patient, Arm::Control);
  return !b.ya && !b.yb_first && b.yb_second;
}

DecompositionReport decomposition_report(std::span<const PatientRecord> cohort) {
  if (cohort.empty()) {
    throw Error(ErrorCode::EmptyCohort, "cohort", "decomposition needs at least one patient");
  }
  long long sum_a = 0, sum_b06 = 0, sum_b612 = 0, sum_effect = 0;
  for (const auto& p : cohort) {
    const ComponentBundle treated = components_under(p, Arm::Treated);
    const ComponentBundle control = components_under(p, Arm::Control);
    sum_a += int(treated.ya) - int(control.ya);
    sum_b06 += int(treated.yb_first) - int(control.yb_first);
    sum_b612 += int(control.yb_second);
    sum_effect += int(composite_outcome(treated)) - int(composite_outcome(control));
  }
  const double n = static_cast<double>(cohort.size());
  return {sum_a / n, sum_b06 / n, sum_b612 / n, sum_effect / n};
}

}  // namespace estimand
