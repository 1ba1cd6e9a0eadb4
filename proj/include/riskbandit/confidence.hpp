#pragma once

#include <cstddef>
#include <vector>

#include "riskbandit/stats.hpp"
#include "riskbandit/types.hpp"

namespace riskbandit {

struct PhiParams {
  RiskTolerance rho;
  SubGaussianParam theta;
};

/// Exploration width
///   phi(x) = 32 (1-rho) theta^2 max(sqrt(x/2), x) + (1-rho) theta^2 x + rho theta sqrt(x).
/// Strictly increasing on [0, inf), phi(0) = 0, breakpoint at x = 1/2.
double phi(double x, const PhiParams& p);

/// Closed-form inverse of phi. Each branch is a quadratic in u = sqrt(x);
/// the branch is chosen by comparing v with phi(1/2).
double phi_inverse(double v, const PhiParams& p);

// Concentration widths for n i.i.d. theta-sub-Gaussian samples, each valid
// with probability at least 1 - delta. delta is accepted in (0, 2], where
// log(2/delta) >= 0.

/// |mu_hat - mu| <= theta sqrt(2 log(2/delta) / n).
double mean_conc_bound(std::size_t n, double delta, double theta);
/// |s_hat^2 - s^2 + (mu_hat - mu)^2| <= 32 theta^2 max(sqrt(L/n), 2L/n), L = log(2/delta).
double var_conc_bound(std::size_t n, double delta, double theta);
/// |MV_hat - MV| <= phi(2 log(2/delta) / n).
double mv_conc_bound(std::size_t n, double delta, const PhiParams& p);

/// Upper bound on E[T_{i,n}] for a suboptimal arm:
/// 8 log(n) / phi^{-1}(Delta_i / 2) + 5. Throws std::domain_error for an
/// optimal arm (Delta_i <= 0).
double expected_pull_bound(std::size_t n, ArmIndex arm, const TrueArmStats& truth,
                           const PhiParams& p,
                           GapConvention convention = GapConvention::MeanVariance);

/// Expected-regret bound after n rounds:
/// (1/n) sum_{suboptimal} (8 log n / phi^{-1}(Delta_i/2) + 5)(Delta_i + 2 Gamma_i^2)
///   + (5/n) sum_i sigma_i^2.
double expected_regret_bound(std::size_t n, const TrueArmStats& truth, const PhiParams& p,
                             GapConvention convention = GapConvention::MeanVariance);

struct HighProbBound {
  double bound = 0.0;
  /// 1 - K/n^3, clamped at 0.
  double confidence = 0.0;
  /// True when K/n^3 >= 1 and the statement says nothing.
  bool vacuous = false;
};

/// Regret bound holding with probability at least 1 - K/n^3:
/// first sum of the expected bound + phi(8 K log n / n) / theta + 16 sqrt(2) K theta log n / n.
HighProbBound high_prob_regret_bound(std::size_t n, const TrueArmStats& truth, const PhiParams& p);

struct BoundReport {
  std::size_t n = 0;
  /// One entry per arm; NaN for optimal arms.
  std::vector<double> per_arm_pull_bound;
  double expected_regret_bound = 0.0;
  HighProbBound high_prob;
};

BoundReport bound_report(std::size_t n, const TrueArmStats& truth, const PhiParams& p);

}  // namespace riskbandit
