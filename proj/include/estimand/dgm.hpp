#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "estimand/trial_model.hpp"

namespace estimand {

/// Z in the potential-outcomes notation: Treated = 1 (short duration),
/// Control = 0 (long duration).
enum class Arm : int { Control = 0, Treated = 1 };

/// Latent discontinuation behaviour, shared by both potential outcomes.
enum class DiscCategory { None, First, Second };

std::string_view to_string(DiscCategory category);

struct PatientRecord {
  std::size_t id = 0;
  bool ya_control = false;
  bool ya_treat = false;
  DiscCategory disc_category = DiscCategory::None;
  std::optional<Arm> assigned_arm;

  // Discontinuation indicators realised under `arm`.
  bool yb_first(Arm) const { return disc_category == DiscCategory::First; }
  bool yb_second(Arm arm) const {
    return arm == Arm::Control && disc_category == DiscCategory::Second;
  }
  bool ya(Arm arm) const { return arm == Arm::Treated ? ya_treat : ya_control; }

  bool operator==(const PatientRecord&) const = default;
};

/// Law of the control-arm clinical outcome given discontinuation timing.
struct ClinicalOutcomeLaw {
  double given_second = 0.0;   // P(ya_control = 1 | Second) = q612
  double given_other = 0.0;    // P(ya_control = 1 | None or First)
  double treat_extra = 0.0;    // P(ya_treat = 1 | ya_control = 0)
  double treat_keep = 1.0;     // P(ya_treat = 1 | ya_control = 1)
};

/// Solves for the conditional rates that keep the control marginal at
/// p_ya_control. Throws MarginalInfeasible when no such law exists.
ClinicalOutcomeLaw clinical_outcome_law(const ScenarioConfig& config);

std::vector<PatientRecord> generate_cohort(const ScenarioConfig& config, std::uint64_t seed);

/// Same law with an explicit cohort size (need not be even).
std::vector<PatientRecord> generate_cohort(const ScenarioConfig& config, std::uint64_t seed,
                                           std::size_t count);

/// Exact 1:1 allocation: a uniform random permutation, first half treated.
std::vector<PatientRecord> assign_arms(std::vector<PatientRecord> cohort, std::uint64_t seed);

/// CSV with header `id,ya_control,ya_treat,disc_category,assigned_arm`.
/// Unassigned patients have an empty assigned_arm cell.
void write_cohort_csv(std::ostream& out, std::span<const PatientRecord> cohort);

}  // namespace estimand
