#pragma once

#include <random>
#include <string>
#include <variant>

namespace riskbandit {

struct GaussianArm {
  double mu = 0.0;
  double sigma2 = 1.0;
};

/// Normal(mu, sigma2) conditioned on [lo, hi]. mu and sigma2 are the parent
/// parameters; the truncated moments are available through ArmDistribution.
struct TruncatedGaussianArm {
  double mu = 0.0;
  double sigma2 = 1.0;
  double lo = -1.0;
  double hi = 1.0;
};

/// Takes value hi with probability p, lo otherwise.
struct ScaledBernoulliArm {
  double lo = 0.0;
  double hi = 1.0;
  double p = 0.5;
};

/// Reward law of a single arm. Moments are exact closed forms.
class ArmDistribution {
 public:
  using Kind = std::variant<GaussianArm, TruncatedGaussianArm, ScaledBernoulliArm>;

  ArmDistribution(GaussianArm g);            // NOLINT(google-explicit-constructor)
  ArmDistribution(TruncatedGaussianArm tg);  // NOLINT(google-explicit-constructor)
  ArmDistribution(ScaledBernoulliArm b);     // NOLINT(google-explicit-constructor)

  static ArmDistribution gaussian(double mu, double sigma2) { return GaussianArm{mu, sigma2}; }

  double true_mean() const { return mean_; }
  double true_variance() const { return variance_; }

  /// Smallest theta we can certify in closed form: sigma for Gaussians,
  /// half the range for bounded arms, min of both for truncated Gaussians.
  double default_theta() const;

  bool is_gaussian() const { return std::holds_alternative<GaussianArm>(kind_); }
  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// One draw. For Gaussian arms the caller may instead supply a standard
  /// normal deviate (correlated sampling) via from_standard_normal.
  double sample(std::mt19937_64& rng) const;
  double from_standard_normal(double z) const;

 private:
  Kind kind_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

}  // namespace riskbandit
