#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "riskbandit/arms.hpp"

namespace riskbandit {

/// K-armed reward generator. Every round draws the full reward vector X_t;
/// vectors are i.i.d. over rounds and may be dependent within a round.
///
/// The static description (arms, correlation, optional convex-combination
/// layer) is immutable and shared between copies; only the RNG is per
/// instance. An environment must not be shared between threads, but copies
/// made with reseeded() are independent.
class BanditEnvironment {
 public:
  /// correlation, when given, must be a symmetric PSD matrix with unit
  /// diagonal and all arms must be Gaussian. Rank-deficient matrices are
  /// accepted (eigenvalues below 1e-12 * lambda_max are floored at 0).
  BanditEnvironment(std::vector<ArmDistribution> arms,
                    std::optional<Eigen::MatrixXd> correlation,
                    std::uint64_t seed);

  /// Number of selectable arms (P after combine_arms, K otherwise).
  std::size_t num_arms() const;
  std::size_t num_base_arms() const;

  /// Writes one draw of X_t into out (size num_arms()).
  void sample_round(std::span<double> out);
  std::vector<double> sample_round();

  const std::vector<double>& true_means() const;
  std::vector<double> true_variances() const;
  const Eigen::MatrixXd& covariance() const;

  /// Per-arm sub-Gaussian parameters implied by the arm laws (propagated
  /// through the convex combination, if any).
  const std::vector<double>& arm_thetas() const;
  /// max_i arm_thetas()[i].
  double common_theta() const;

  const std::vector<ArmDistribution>& base_arms() const;
  const std::optional<Eigen::MatrixXd>& correlation() const;
  /// P x K weight matrix when this environment wraps a combination.
  const std::optional<Eigen::MatrixXd>& mixing() const;

  std::uint64_t seed() const { return seed_; }
  /// Same law, fresh RNG seeded with seed.
  BanditEnvironment reseeded(std::uint64_t seed) const;

  /// Row-stochastic combination layer. Used by combine_arms.
  BanditEnvironment with_mixing(const Eigen::MatrixXd& weights,
                                std::vector<double> thetas) const;

 private:
  struct Model;
  BanditEnvironment(std::shared_ptr<const Model> model, std::uint64_t seed);

  std::shared_ptr<const Model> model_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::vector<double> base_draw_;
  std::vector<double> normals_;
};

struct CombinedEnvironment {
  BanditEnvironment environment;
  /// theta_j = sum_i w_ji theta_i for every new arm j.
  std::vector<double> thetas;
};

/// Turns a K-armed environment into a P-armed one whose round-t reward is
/// Y_t = W X_t. Rows of weights must be convex combinations (tolerance 1e-12).
CombinedEnvironment combine_arms(const BanditEnvironment& env, const Eigen::MatrixXd& weights,
                                 std::span<const double> thetas);

/// K x K matrix with unit diagonal and tau elsewhere.
Eigen::MatrixXd equicorrelation(std::size_t k, double tau);

}  // namespace riskbandit
