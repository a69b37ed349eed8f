#include <cmath>
#include <random>

#include "doctest.h"

#include "estimand/dgm.hpp"
#include "estimand/error.hpp"
#include "estimand/io.hpp"
#include "estimand/oracle.hpp"
#include "estimand/outcomes.hpp"

using namespace estimand;

namespace {

double atom_sum(const std::vector<JointAtom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.probability;
  return s;
}

double atom_mass(const std::vector<JointAtom>& atoms, bool ya, DiscCategory disc) {
  double s = 0.0;
  for (const auto& a : atoms) {
    if (a.ya == ya && a.disc == disc) s += a.probability;
  }
  return s;
}

// Brute force over the latent variables of one patient: discontinuation
// period, control clinical outcome and the treat-arm coupling draw. Composite
// outcomes come from the per-arm case definitions.
struct BruteForce {
  double p_treat = 0.0, p_control = 0.0, excess = 0.0;
};

BruteForce enumerate(const ScenarioConfig& c) {
  const double rest = 1.0 - c.p_disc_second;
  const double r = rest > 0 ? (c.p_ya_control - c.q612 * c.p_disc_second) / rest : c.p_ya_control;
  const double up = c.p_ya_treat > c.p_ya_control
                        ? (c.p_ya_treat - c.p_ya_control) / (1 - c.p_ya_control) : 0.0;
  const double keep = c.p_ya_treat < c.p_ya_control ? c.p_ya_treat / c.p_ya_control : 1.0;

  BruteForce out;
  const std::pair<int, double> periods[] = {
      {0, 1 - c.p_disc_first - c.p_disc_second}, {1, c.p_disc_first}, {2, c.p_disc_second}};
  for (auto [period, p_period] : periods) {
    const double rate = period == 2 ? c.q612 : r;
    for (int ya_c : {0, 1}) {
      const double p_ya = ya_c ? rate : 1 - rate;
      for (int ya_t : {0, 1}) {
        const double p_t = ya_c ? (ya_t ? keep : 1 - keep) : (ya_t ? up : 1 - up);
        const double w = p_period * p_ya * p_t;
        const bool y_control = ya_c || period == 1 || period == 2;
        const bool y_treat = ya_t || period == 1;
        out.p_control += w * y_control;
        out.p_treat += w * y_treat;
        out.excess += w * (!ya_c && period == 2);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("joint distribution atoms") {
  const JointDistribution ind = joint_distribution(find_preset("scenario1-independence").config);
  CHECK(atom_mass(ind.control, true, DiscCategory::Second) == doctest::Approx(0.06));
  const JointDistribution cal = joint_distribution(find_preset("scenario1-calibrated").config);
  CHECK(atom_mass(cal.control, false, DiscCategory::Second) == doctest::Approx(0.10));
  for (const auto* law : {&ind, &cal}) {
    CHECK(std::abs(atom_sum(law->control) - 1.0) < 1e-12);
    CHECK(std::abs(atom_sum(law->treated) - 1.0) < 1e-12);
    CHECK(atom_mass(law->treated, true, DiscCategory::Second) == 0.0);
    CHECK(atom_mass(law->treated, false, DiscCategory::Second) == 0.0);
  }

  ScenarioConfig certain = find_preset("scenario1-independence").config;
  certain.p_ya_control = certain.p_ya_treat = 1.0;
  certain.p_disc_first = certain.p_disc_second = 0.0;
  certain.q612 = 1.0;
  const JointDistribution law = joint_distribution(certain);
  CHECK(atom_mass(law.control, true, DiscCategory::None) == 1.0);
  CHECK(atom_mass(law.treated, true, DiscCategory::None) == 1.0);
}

TEST_CASE("independence preset") {
  const OracleSummary o = summarize_population(find_preset("scenario1-independence").config);
  CHECK(o.p_event_treat == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(o.p_event_control == doctest::Approx(0.58).epsilon(1e-12));
  CHECK(o.true_rd == doctest::Approx(-0.09).epsilon(1e-12));
  CHECK(o.expected_excess == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(o.asymptotic_rejection == doctest::Approx(0.8172064356086992).epsilon(1e-9));
}

TEST_CASE("calibrated presets") {
  const OracleSummary s1 = summarize_population(find_preset("scenario1-calibrated").config);
  CHECK(s1.p_event_control == doctest::Approx(0.5882352941176471).epsilon(1e-12));
  CHECK(s1.true_rd == doctest::Approx(-0.10).epsilon(1e-12));
  CHECK(s1.expected_excess == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(s1.asymptotic_rejection == doctest::Approx(0.8902152565391368).epsilon(1e-9));

  const OracleSummary s2 = summarize_population(find_preset("scenario2-calibrated").config);
  CHECK(s2.true_rd == doctest::Approx(-0.014705882352941235).epsilon(1e-10));
  CHECK(s2.expected_excess == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(s2.asymptotic_rejection == doctest::Approx(0.07581103816175433).epsilon(1e-8));
}

TEST_CASE("no arm-only category means no artefact") {
  const OracleSummary o = summarize_population(find_preset("baseline-no-arm-only").config);
  CHECK(std::abs(o.true_rd) < 1e-15);
  CHECK(o.expected_excess == 0.0);
  CHECK(o.asymptotic_rejection == doctest::Approx(0.05).epsilon(1e-12));

  ScenarioConfig harmful = find_preset("scenario2-calibrated").config;
  harmful.p_disc_second = 0.0;
  // Shared discontinuation only: theta = (0.5 - 0.4) * P(no first-period discontinuation).
  CHECK(summarize_population(harmful).true_rd == doctest::Approx(0.1 * 0.85).epsilon(1e-12));
}

TEST_CASE("oracle matches brute-force enumeration on random feasible configs") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 300) {
    ScenarioConfig c = find_preset("scenario1-independence").config;
    c.p_ya_control = unit(gen);
    c.p_ya_treat = unit(gen);
    c.p_disc_first = 0.5 * unit(gen);
    c.p_disc_second = 0.5 * unit(gen);
    c.q612 = unit(gen);
    OracleSummary o;
    try {
      o = summarize_population(c);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::MarginalInfeasible);
      continue;
    }
    ++checked;
    const BruteForce b = enumerate(c);
    CHECK(o.p_event_treat == doctest::Approx(b.p_treat).epsilon(1e-12));
    CHECK(o.p_event_control == doctest::Approx(b.p_control).epsilon(1e-12));
    CHECK(o.true_rd == doctest::Approx(b.p_treat - b.p_control).epsilon(1e-12));
    CHECK(o.expected_excess == doctest::Approx(500.0 * b.excess).epsilon(1e-12));
    CHECK(o.expected_excess >= 0.0);
    CHECK(o.expected_excess <= 500.0);
    CHECK(o.asymptotic_rejection >= 0.0);
    CHECK(o.asymptotic_rejection <= 1.0);
  }
}

TEST_CASE("infeasible laws are rejected like the generator rejects them") {
  ScenarioConfig c = find_preset("scenario1-independence").config;
  c.q612 = 1.0;
  c.p_disc_second = 0.5;
  c.p_disc_first = 0.1;
  CHECK_THROWS_AS(joint_distribution(c), Error);
  CHECK_THROWS_AS(clinical_outcome_law(c), Error);
}

TEST_CASE("expected excess agrees with generated cohorts") {
  constexpr std::size_t n = 1'000'000;
  for (const char* name : {"scenario1-independence", "scenario1-calibrated"}) {
    CAPTURE(name);
    const ScenarioConfig c = find_preset(name).config;
    const double p = summarize_population(c).expected_excess / (c.n / 2.0);
    auto cohort = generate_cohort(c, 2024, n);
    double hits = 0;
    for (auto& patient : cohort) {
      patient.assigned_arm = Arm::Control;
      hits += excess_indicator(patient);
    }
    CHECK(std::abs(hits / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
  }
}
