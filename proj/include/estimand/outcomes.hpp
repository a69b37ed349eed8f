#pragma once

#include <span>

#include "estimand/dgm.hpp"

namespace estimand {

/// Realised outcome components under one arm.
struct ComponentBundle {
  bool ya = false;
  bool yb_first = false;
  bool yb_second = false;  // always false under the short-duration arm
};

ComponentBundle components_under(const PatientRecord& patient, Arm arm);

/// Unfavourable composite: 1 - (1-ya)(1-yb_first)(1-yb_second).
constexpr bool composite_outcome(const ComponentBundle& b) {
  return 1 - (1 - int(b.ya)) * (1 - int(b.yb_first)) * (1 - int(b.yb_second)) != 0;
}

/// Composite outcome the patient would have under `arm`.
bool potential_outcome(const PatientRecord& patient, Arm arm);

/// Composite is unfavourable only because of the arm-only (months 6-12)
/// discontinuation category. Always false unless assigned to control.
bool excess_indicator(const PatientRecord& patient);

/// Cohort means of the component contrasts, using both potential-outcome
/// sets of every patient.
struct DecompositionReport {
  double d_a = 0.0;     // mean(Y_a^1 - Y_a^0)
  double d_b06 = 0.0;   // mean(Y_b,0-6^1 - Y_b,0-6^0)
  double m_b612 = 0.0;  // mean(Y_b,6-12^0)
  double mean_effect = 0.0;  // mean(Y^1 - Y^0), exact per-patient contrast

  // Additive decomposition d_a + d_b06 - m_b612; exact only if components
  // never overlap.
  double additive_effect() const { return d_a + d_b06 - m_b612; }
  double implied_rd_gap() const { return additive_effect() - mean_effect; }
};

DecompositionReport decomposition_report(std::span<const PatientRecord> cohort);

}  // namespace estimand
