#include "estimand/dgm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "estimand/error.hpp"
#include "estimand/rng.hpp"

namespace estimand {

namespace {
constexpr double kFeasibilitySlack = 1e-12;
}

std::string_view to_string(DiscCategory category) {
  switch (category) {
    case DiscCategory::None: return "none";
    case DiscCategory::First: return "first";
    case DiscCategory::Second: return "second";
  }
  return "none";
}

ClinicalOutcomeLaw clinical_outcome_law(const ScenarioConfig& config) {
  const double p_ya = config.p_ya_control;
  const double p2 = config.p_disc_second;
  const double q = config.q612;

  ClinicalOutcomeLaw law;
  law.given_second = q;

  const double mass_second = q * p2;
  if (mass_second > p_ya + kFeasibilitySlack) {
    throw Error(ErrorCode::MarginalInfeasible, "q612",
                "q612 * p_disc_second exceeds p_ya_control");
  }
  const double rest = 1.0 - p2;
  if (rest <= 0.0) {
    if (std::abs(q - p_ya) > kFeasibilitySlack) {
      throw Error(ErrorCode::MarginalInfeasible, "q612",
                  "with p_disc_second = 1 the marginal forces q612 = p_ya_control");
    }
    law.given_other = p_ya;
  } else {
    law.given_other = (p_ya - mass_second) / rest;
    if (law.given_other > 1.0 + kFeasibilitySlack) {
      throw Error(ErrorCode::MarginalInfeasible, "q612",
                  "p_ya_control cannot be reached outside months 6-12 with this q612");
    }
    law.given_other = std::clamp(law.given_other, 0.0, 1.0);
  }

  const double pt = config.p_ya_treat;
  if (pt > p_ya) {
    law.treat_extra = (pt - p_ya) / (1.0 - p_ya);
  } else if (pt < p_ya) {
    law.treat_keep = pt / p_ya;
  }
  return law;
}

std::vector<PatientRecord> generate_cohort(const ScenarioConfig& config, std::uint64_t seed) {
  return generate_cohort(config, seed, static_cast<std::size_t>(config.n));
}

std::vector<PatientRecord> generate_cohort(const ScenarioConfig& config, std::uint64_t seed,
                                           std::size_t count) {
  const ClinicalOutcomeLaw law = clinical_outcome_law(config);
  Rng rng(seed);

  std::vector<PatientRecord> cohort(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Three draws per patient, always consumed, so patient i's outcomes do
    // not depend on the parameter values seen by patients before it.
    const double u_disc = rng.uniform();
    const double u_ya = rng.uniform();
    const double u_treat = rng.uniform();

    PatientRecord& p = cohort[i];
    p.id = i;
    if (u_disc < config.p_disc_first) {
      p.disc_category = DiscCategory::First;
    } else if (u_disc < config.p_disc_first + config.p_disc_second) {
      p.disc_category = DiscCategory::Second;
    } else {
      p.disc_category = DiscCategory::None;
    }

    const double rate =
        p.disc_category == DiscCategory::Second ? law.given_second : law.given_other;
    p.ya_control = u_ya < rate;
    p.ya_treat = p.ya_control ? (u_treat < law.treat_keep) : (u_treat < law.treat_extra);
  }
  return cohort;
}

std::vector<PatientRecord> assign_arms(std::vector<PatientRecord> cohort, std::uint64_t seed) {
  if (cohort.size() % 2 != 0) {
    throw Error(ErrorCode::OddCohortSize, "n",
                "cohort of " + std::to_string(cohort.size()) + " cannot be split 1:1");
  }
  std::vector<std::size_t> order(cohort.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }

  const std::size_t half = cohort.size() / 2;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cohort[order[k]].assigned_arm = k < half ? Arm::Treated : Arm::Control;
  }
  return cohort;
}

void write_cohort_csv(std::ostream& out, std::span<const PatientRecord> cohort) {
  out << "id,ya_control,ya_treat,disc_category,assigned_arm\n";
  for (const auto& p : cohort) {
    out << p.id << ',' << int(p.ya_control) << ',' << int(p.ya_treat) << ','
        << to_string(p.disc_category) << ',';
    if (p.assigned_arm) out << static_cast<int>(*p.assigned_arm);
    out << '\n';
  }
}

}  // namespace estimand
