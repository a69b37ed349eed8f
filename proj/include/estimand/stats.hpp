#pragma once

#include <cstdint>
#include <span>

#include "estimand/trial_model.hpp"

namespace estimand {

/// Binary outcomes, one byte per patient (0 or 1).
using BinaryOutcomes = std::span<const std::uint8_t>;

struct TestResult {
  double estimate = 0.0;  // mean(treat) - mean(control)
  double se = 0.0;
  double t_stat = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  bool rejected = false;
};

double risk_difference(BinaryOutcomes y_treat, BinaryOutcomes y_control);

/// Two-sample t-test, two-sided. Pooled: s^2 = (SS_t + SS_c)/(n_t + n_c - 2),
/// se = sqrt(s^2 (1/n_t + 1/n_c)), df = n_t + n_c - 2. Welch uses the
/// unequal-variance se and Satterthwaite df.
///
/// Zero standard error is resolved without dividing: t = 0, p = 1 when the
/// estimate is 0, otherwise t = +-inf, p = 0.
TestResult pooled_t_test(BinaryOutcomes y_treat, BinaryOutcomes y_control, double alpha,
                         TTestKind kind = TTestKind::Pooled);

/// Regularized incomplete beta I_x(a, b) via Lentz continued fraction.
double reg_inc_beta(double a, double b, double x);

/// Student-t CDF for real df > 0; integer df is the usual case.
double student_t_cdf(double t, double df);

double normal_cdf(double z);
/// Inverse of normal_cdf for p in (0, 1).
double normal_quantile(double p);

/// Sample standard deviation (n - 1 denominator); needs >= 2 values.
double sample_sd(std::span<const double> values);

/// sd(values) / sqrt(count).
double mcse_mean(std::span<const double> values);
/// sqrt(p_hat (1 - p_hat) / n_reps).
double mcse_proportion(double p_hat, long long n_reps);

}  // namespace estimand
