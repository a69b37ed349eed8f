#include "estimand/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "estimand/error.hpp"

namespace estimand {

namespace {

constexpr int kMaxIterations = 300;
constexpr double kConvergence = 1e-15;
constexpr double kTiny = 1e-300;

struct ArmMoments {
  double n = 0.0;
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations
};

ArmMoments moments(BinaryOutcomes y, const char* arm) {
  if (y.empty()) {
    throw Error(ErrorCode::EmptyArm, arm, std::string(arm) + " arm has no observations");
  }
  long long events = 0;
  for (std::uint8_t v : y) events += v != 0;
  ArmMoments m;
  m.n = static_cast<double>(y.size());
  m.mean = static_cast<double>(events) / m.n;
  // For 0/1 data the sum of squared deviations is n * p * (1 - p).
  m.ss = m.n * m.mean * (1.0 - m.mean);
  return m;
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kConvergence) break;
  }
  return h;
}

}  // namespace

double risk_difference(BinaryOutcomes y_treat, BinaryOutcomes y_control) {
  return moments(y_treat, "treat").mean - moments(y_control, "control").mean;
}

TestResult pooled_t_test(BinaryOutcomes y_treat, BinaryOutcomes y_control, double alpha,
                         TTestKind kind) {
  const ArmMoments t = moments(y_treat, "treat");
  const ArmMoments c = moments(y_control, "control");
  if (t.n < 2 || c.n < 2) {
    throw Error(ErrorCode::EmptyArm, t.n < 2 ? "treat" : "control",
                "t-test needs at least two observations per arm");
  }

  TestResult r;
  r.estimate = t.mean - c.mean;
  r.df = t.n + c.n - 2.0;
  if (kind == TTestKind::Pooled) {
    const double s2 = (t.ss + c.ss) / r.df;
    r.se = std::sqrt(s2 * (1.0 / t.n + 1.0 / c.n));
  } else {
    const double vt = t.ss / (t.n - 1.0) / t.n;
    const double vc = c.ss / (c.n - 1.0) / c.n;
    r.se = std::sqrt(vt + vc);
    if (r.se > 0.0) {
      r.df = (vt + vc) * (vt + vc) / (vt * vt / (t.n - 1.0) + vc * vc / (c.n - 1.0));
    }
  }

  if (r.se == 0.0) {
    if (r.estimate == 0.0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), r.estimate);
      r.p_value = 0.0;
    }
  } else {
    r.t_stat = r.estimate / r.se;
    // 2 * (1 - T_df(|t|)) = I_{df/(df+t^2)}(df/2, 1/2)
    r.p_value = reg_inc_beta(r.df / 2.0, 0.5, r.df / (r.df + r.t_stat * r.t_stat));
  }
  r.rejected = r.p_value < alpha;
  return r;
}

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::DomainError, "reg_inc_beta",
                "requires a > 0, b > 0 and 0 <= x <= 1");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) {
    throw Error(ErrorCode::NonPositiveDf, "df", "degrees of freedom must be positive");
  }
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::DomainError, "p", "normal quantile needs 0 < p < 1");
  }
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::TooFewValues, "values", "standard deviation needs >= 2 values");
  }
  // Shifted by the first value: exact zero for constant input.
  const double shift = values.front();
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - shift - mean) * (v - shift - mean);
  return std::sqrt(ss / (n - 1.0));
}

double mcse_mean(std::span<const double> values) {
  return sample_sd(values) / std::sqrt(static_cast<double>(values.size()));
}

double mcse_proportion(double p_hat, long long n_reps) {
  if (n_reps < 1) {
    throw Error(ErrorCode::TooFewValues, "n_reps", "proportion MCSE needs n_reps >= 1");
  }
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
    throw Error(ErrorCode::DomainError, "p_hat", "proportion must lie in [0, 1]");
  }
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_reps));
}

}  // namespace estimand
