#include "riskbandit/confidence.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riskbandit {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 2.0)) {
    throw std::invalid_argument("confidence level delta must lie in (0, 2], got " +
                                std::to_string(delta));
  }
}

void check_n(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample count n must be >= 1");
}

// Positive root of a u^2 + b u - v = 0 for a, b >= 0 (not both 0), v >= 0,
// written without the cancellation-prone -b + sqrt(...) numerator.
double positive_root(double a, double b, double v) {
  if (v == 0.0) return 0.0;
  return 2.0 * v / (b + std::sqrt(b * b + 4.0 * a * v));
}

// First sum of the regret bounds: sum over suboptimal arms.
double suboptimal_sum(std::size_t n, const TrueArmStats& truth, const PhiParams& p,
                      GapConvention convention) {
  const auto gaps = truth.gaps(p.rho, convention);
  const auto gamma = truth.gamma_max();
  const double log_n = std::log(static_cast<double>(n));
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.num_arms(); ++i) {
    if (truth.is_optimal(ArmIndex(i), p.rho)) continue;
    if (!(gaps[i] > 0.0)) {
      throw std::domain_error("suboptimal arm " + std::to_string(i + 1) +
                              " has a non-positive gap under the selected convention");
    }
    const double pulls = 8.0 * log_n / phi_inverse(gaps[i] / 2.0, p) + 5.0;
    sum += pulls * (gaps[i] + 2.0 * gamma[i] * gamma[i]);
  }
  return sum / static_cast<double>(n);
}

}  // namespace

double phi(double x, const PhiParams& p) {
  if (!(x >= 0.0)) throw std::invalid_argument("phi is defined for x >= 0, got " + std::to_string(x));
  const double rho = p.rho.value();
  const double theta = p.theta.value();
  const double th2 = theta * theta;
  const double variance_part = 32.0 * (1.0 - rho) * th2 * std::max(std::sqrt(x / 2.0), x);
  const double square_part = (1.0 - rho) * th2 * x;
  const double mean_part = rho * theta * std::sqrt(x);
  return variance_part + square_part + mean_part;
}

double phi_inverse(double v, const PhiParams& p) {
  if (!(v >= 0.0)) {
    throw std::invalid_argument("phi_inverse is defined for v >= 0, got " + std::to_string(v));
  }
  if (v == 0.0) return 0.0;
  const double rho = p.rho.value();
  const double theta = p.theta.value();
  const double th2 = theta * theta;
  const double breakpoint = phi(0.5, p);
  double u;
  if (v < breakpoint) {
    // 32 (1-rho) th2 sqrt(x/2) = 16 sqrt(2) (1-rho) th2 u
    u = positive_root((1.0 - rho) * th2, rho * theta + 16.0 * std::numbers::sqrt2 * (1.0 - rho) * th2,
                      v);
  } else {
    u = positive_root(33.0 * (1.0 - rho) * th2, rho * theta, v);
  }
  return u * u;
}

double mean_conc_bound(std::size_t n, double delta, double theta) {
  check_n(n);
  check_delta(delta);
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  return theta * std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(n));
}

double var_conc_bound(std::size_t n, double delta, double theta) {
  check_n(n);
  check_delta(delta);
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  const double l = std::log(2.0 / delta) / static_cast<double>(n);
  return 32.0 * theta * theta * std::max(std::sqrt(l), 2.0 * l);
}

double mv_conc_bound(std::size_t n, double delta, const PhiParams& p) {
  check_n(n);
  check_delta(delta);
  return phi(2.0 * std::log(2.0 / delta) / static_cast<double>(n), p);
}

double expected_pull_bound(std::size_t n, ArmIndex arm, const TrueArmStats& truth,
                           const PhiParams& p, GapConvention convention) {
  check_n(n);
  if (arm.value >= truth.num_arms()) throw std::out_of_range("arm index out of range");
  const double gap = truth.gaps(p.rho, convention)[arm.value];
  if (truth.is_optimal(arm, p.rho) || !(gap > 0.0)) {
    throw std::domain_error("pull bound is undefined for optimal arm " +
                            std::to_string(arm.one_based()));
  }
  return 8.0 * std::log(static_cast<double>(n)) / phi_inverse(gap / 2.0, p) + 5.0;
}

double expected_regret_bound(std::size_t n, const TrueArmStats& truth, const PhiParams& p,
                             GapConvention convention) {
  check_n(n);
  if (n < truth.num_arms()) throw std::invalid_argument("regret bound needs n >= K");
  double var_sum = 0.0;
  for (double s : truth.sigma2()) var_sum += s;
  return suboptimal_sum(n, truth, p, convention) + 5.0 * var_sum / static_cast<double>(n);
}

HighProbBound high_prob_regret_bound(std::size_t n, const TrueArmStats& truth,
                                     const PhiParams& p) {
  check_n(n);
  const auto k = truth.num_arms();
  if (n < k) throw std::invalid_argument("high-probability bound needs n >= K");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double theta = p.theta.value();
  const double log_n = std::log(nd);
  HighProbBound out;
  out.bound = suboptimal_sum(n, truth, p, GapConvention::MeanVariance) +
              phi(8.0 * kd * log_n / nd, p) / theta +
              16.0 * std::numbers::sqrt2 * kd * theta * log_n / nd;
  const double fail = kd / (nd * nd * nd);
  out.vacuous = fail >= 1.0;
  out.confidence = out.vacuous ? 0.0 : 1.0 - fail;
  return out;
}

BoundReport bound_report(std::size_t n, const TrueArmStats& truth, const PhiParams& p) {
  BoundReport r;
  r.n = n;
  r.per_arm_pull_bound.resize(truth.num_arms(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < truth.num_arms(); ++i) {
    if (!truth.is_optimal(ArmIndex(i), p.rho)) {
      r.per_arm_pull_bound[i] = expected_pull_bound(n, ArmIndex(i), truth, p);
    }
  }
  r.expected_regret_bound = expected_regret_bound(n, truth, p);
  r.high_prob = high_prob_regret_bound(n, truth, p);
  return r;
}

}  // namespace riskbandit
