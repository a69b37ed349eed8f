#include "estimand/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "estimand/error.hpp"
#include "estimand/stats.hpp"

namespace estimand {

JointDistribution joint_distribution(const ScenarioConfig& config) {
  const double p1 = config.p_disc_first;
  const double p2 = config.p_disc_second;
  const double p0 = std::max(0.0, 1.0 - p1 - p2);
  const double pc = config.p_ya_control;
  const double pt = config.p_ya_treat;
  const double q = config.q612;

  // P(ya_control = 1 | disc != Second) from pc = q*p2 + r*(1 - p2).
  double r = pc;
  if (p2 < 1.0) {
    r = (pc - q * p2) / (1.0 - p2);
  } else if (std::abs(q - pc) > 1e-12) {
    throw Error(ErrorCode::MarginalInfeasible, "q612", "p_disc_second = 1 forces q612 = p_ya_control");
  }
  if (r < -1e-12 || r > 1.0 + 1e-12) {
    throw Error(ErrorCode::MarginalInfeasible, "q612",
                "no control law with these q612 and p_ya_control");
  }
  r = std::min(1.0, std::max(0.0, r));

  // Monotone coupling of the treated clinical outcome onto the control one.
  const double up = pt > pc ? (pt - pc) / (1.0 - pc) : 0.0;
  const double keep = pt < pc ? pt / pc : 1.0;
  auto treated_rate = [&](double control_rate) {
    return control_rate * keep + (1.0 - control_rate) * up;
  };

  JointDistribution law;
  const struct {
    DiscCategory disc;
    double mass;
    double control_rate;
  } cells[] = {{DiscCategory::None, p0, r}, {DiscCategory::First, p1, r}, {DiscCategory::Second, p2, q}};

  for (const auto& cell : cells) {
    law.control.push_back({true, cell.disc, cell.mass * cell.control_rate});
    law.control.push_back({false, cell.disc, cell.mass * (1.0 - cell.control_rate)});
  }
  double treated_none_ya1 = 0.0, treated_none_ya0 = 0.0;
  for (const auto& cell : cells) {
    const double rate = treated_rate(cell.control_rate);
    if (cell.disc == DiscCategory::First) {
      law.treated.push_back({true, DiscCategory::First, cell.mass * rate});
      law.treated.push_back({false, DiscCategory::First, cell.mass * (1.0 - rate)});
    } else {
      treated_none_ya1 += cell.mass * rate;
      treated_none_ya0 += cell.mass * (1.0 - rate);
    }
  }
  law.treated.push_back({true, DiscCategory::None, treated_none_ya1});
  law.treated.push_back({false, DiscCategory::None, treated_none_ya0});
  return law;
}

OracleSummary summarize_population(const ScenarioConfig& config) {
  const JointDistribution law = joint_distribution(config);

  auto favourable_mass = [](const std::vector<JointAtom>& atoms) {
    double mass = 0.0;
    for (const auto& atom : atoms) {
      if (!atom.ya && atom.disc == DiscCategory::None) mass += atom.probability;
    }
    return mass;
  };

  OracleSummary s;
  s.p_event_treat = 1.0 - favourable_mass(law.treated);
  s.p_event_control = 1.0 - favourable_mass(law.control);
  s.true_rd = s.p_event_treat - s.p_event_control;

  double excess_mass = 0.0;
  for (const auto& atom : law.control) {
    if (!atom.ya && atom.disc == DiscCategory::Second) excess_mass += atom.probability;
  }
  const double per_arm = config.n / 2.0;
  s.expected_excess = per_arm * excess_mass;

  s.se_asymptotic = std::sqrt(s.p_event_treat * (1.0 - s.p_event_treat) / per_arm +
                              s.p_event_control * (1.0 - s.p_event_control) / per_arm);
  const double z = normal_quantile(1.0 - config.alpha / 2.0);
  if (s.se_asymptotic > 0.0) {
    const double shift = s.true_rd / s.se_asymptotic;
    s.asymptotic_rejection = normal_cdf(-z - shift) + normal_cdf(-z + shift);
  } else {
    // Degenerate law: every replication sees constant outcomes.
    s.asymptotic_rejection = s.true_rd != 0.0 ? 1.0 : 0.0;
  }
  return s;
}

}  // namespace estimand
