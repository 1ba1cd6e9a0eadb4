#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riskbandit/types.hpp"

namespace riskbandit {

/// Streaming count/mean/variance (Welford). Variance uses divisor n
/// (population variance), matching the per-arm empirical moments the
/// index policies are defined on.
class RunningMoments {
 public:
  void push(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  /// m2 / count; 0 for an empty accumulator.
  double variance() const { return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_); }

  /// (1 - rho) * variance - rho * mean.
  double mean_variance(RiskTolerance rho) const {
    return (1.0 - rho.value()) * variance() - rho.value() * mean();
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Pull {
  std::size_t round;  // 1-based
  ArmIndex arm;
  double reward;
};

/// Ordered record of (round, arm, reward) with per-arm pull counters.
class PullLog {
 public:
  explicit PullLog(std::size_t num_arms) : counts_(num_arms, 0) {}

  void append(ArmIndex arm, double reward);

  std::size_t size() const { return pulls_.size(); }
  bool empty() const { return pulls_.empty(); }
  std::size_t num_arms() const { return counts_.size(); }
  const std::vector<Pull>& pulls() const { return pulls_; }
  const Pull& operator[](std::size_t i) const { return pulls_[i]; }

  /// T_{i,n} for the whole log.
  const std::vector<std::size_t>& counts() const { return counts_; }
  /// Per-arm moments recomputed from the log.
  std::vector<RunningMoments> arm_moments() const;
  /// Copy of the first n entries.
  PullLog prefix(std::size_t n) const;

  friend bool operator==(const PullLog& a, const PullLog& b);

 private:
  std::vector<Pull> pulls_;
  std::vector<std::size_t> counts_;
};

/// Which gap definition to use for Delta_i.
enum class GapConvention {
  /// Delta_i = MV_i - MV_{i0} = (1-rho)(s_i^2 - s_{i0}^2) - rho (mu_i - mu_{i0}).
  MeanVariance,
  /// Delta_i = (s_i^2 - s_{i0}^2) - rho (mu_i - mu_{i0}); the variant printed
  /// in the statement of the expected-regret bound. Only for comparisons.
  UnscaledVariance,
};

/// True per-arm moments and derived mean-variance quantities.
class TrueArmStats {
 public:
  TrueArmStats(std::vector<double> mu, std::vector<double> sigma2);

  std::size_t num_arms() const { return mu_.size(); }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& sigma2() const { return sigma2_; }

  /// MV^rho_i = (1 - rho) sigma_i^2 - rho mu_i.
  std::vector<double> mv(RiskTolerance rho) const;
  double min_mv(RiskTolerance rho) const;
  /// All argmin arms of mv within absolute tolerance 1e-12, ascending.
  std::vector<ArmIndex> optimal_set(RiskTolerance rho) const;
  bool is_optimal(ArmIndex arm, RiskTolerance rho) const;
  /// First element of optimal_set.
  ArmIndex optimal_arm(RiskTolerance rho) const;

  std::vector<double> gaps(RiskTolerance rho,
                           GapConvention convention = GapConvention::MeanVariance) const;
  /// Gamma_{i,max} = max_h |mu_i - mu_h|.
  std::vector<double> gamma_max() const;

 private:
  std::vector<double> mu_;
  std::vector<double> sigma2_;
};

/// Mean-variance of all rewards collected so far, around their global mean.
double empirical_mv_policy(const PullLog& log, RiskTolerance rho);
double empirical_mv_policy(std::span<const double> rewards, RiskTolerance rho);

/// empirical_mv_policy - min_i MV_i. Signed: can be negative on one run.
double regret(const PullLog& log, const TrueArmStats& truth, RiskTolerance rho);

struct RegretDecomposition {
  double term1 = 0.0;  // (1/n) sum_i T_i hat-Delta_i
  double term2 = 0.0;  // (1/n^2) sum_i sum_{h != i} T_i T_h hat-Gamma_{ih}^2
  double total() const { return term1 + term2; }
};

/// Almost-sure upper bound regret <= term1 + term2. In fact
/// regret == term1 + (1 - rho) / 2 * term2 exactly.
RegretDecomposition regret_decomposition(const PullLog& log,
                                         std::span<const RunningMoments> moments,
                                         const TrueArmStats& truth, RiskTolerance rho);

inline RiskTolerance rho_from_tilde(double rho_tilde) { return RiskTolerance::from_tilde(rho_tilde); }

/// Tracks the policy-level empirical mean-variance incrementally so the
/// regret trajectory costs O(1) per round.
class RegretTracker {
 public:
  RegretTracker(RiskTolerance rho, double optimal_mv) : rho_(rho), optimal_mv_(optimal_mv) {}
  /// Pushes one reward and returns the regret at the new round count.
  double push(double reward) {
    moments_.push(reward);
    return moments_.mean_variance(rho_) - optimal_mv_;
  }

 private:
  RiskTolerance rho_;
  double optimal_mv_;
  RunningMoments moments_;
};

}  // namespace riskbandit
