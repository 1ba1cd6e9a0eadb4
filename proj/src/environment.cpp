#include "riskbandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riskbandit {

struct BanditEnvironment::Model {
  std::vector<ArmDistribution> arms;
  std::optional<Eigen::MatrixXd> correlation;
  Eigen::MatrixXd factor;  // covariance = factor * factor^T, only when correlated
  std::optional<Eigen::MatrixXd> mixing;
  std::vector<double> means;
  Eigen::MatrixXd covariance;
  std::vector<double> thetas;
};

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kEigenFloor = 1e-12;

void validate_correlation(const Eigen::MatrixXd& c, std::size_t k) {
  if (static_cast<std::size_t>(c.rows()) != k || static_cast<std::size_t>(c.cols()) != k) {
    std::ostringstream os;
    os << "correlation matrix must be " << k << "x" << k << ", got " << c.rows() << "x"
       << c.cols();
    throw std::invalid_argument(os.str());
  }
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    if (std::abs(c(i, i) - 1.0) > kSymmetryTol) {
      throw std::invalid_argument("correlation matrix must have unit diagonal");
    }
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (!std::isfinite(c(i, j)) || std::abs(c(i, j)) > 1.0 + kSymmetryTol) {
        throw std::invalid_argument("correlation entries must lie in [-1, 1]");
      }
      if (std::abs(c(i, j) - c(j, i)) > kSymmetryTol) {
        throw std::invalid_argument("correlation matrix must be symmetric");
      }
    }
  }
}

// Returns L with L L^T = cov, flooring tiny eigenvalues; rejects non-PSD input.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& correlation, const Eigen::VectorXd& sd) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation);
  if (eig.info() != Eigen::Success) {
    throw std::invalid_argument("eigen-decomposition of the correlation matrix failed");
  }
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.maxCoeff());
  if (lambda.minCoeff() < -kEigenFloor * scale) {
    std::ostringstream os;
    os << "correlation matrix is not positive semi-definite (smallest eigenvalue "
       << lambda.minCoeff() << ")";
    throw std::invalid_argument(os.str());
  }
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda(i) = lambda(i) <= kEigenFloor * scale ? 0.0 : std::sqrt(lambda(i));
  }
  return sd.asDiagonal() * eig.eigenvectors() * lambda.asDiagonal();
}

}  // namespace

BanditEnvironment::BanditEnvironment(std::vector<ArmDistribution> arms,
                                     std::optional<Eigen::MatrixXd> correlation,
                                     std::uint64_t seed)
    : seed_(seed), rng_(seed) {
  if (arms.empty()) throw std::invalid_argument("environment needs at least one arm");
  auto model = std::make_shared<Model>();
  const auto k = arms.size();
  Eigen::VectorXd sd(static_cast<Eigen::Index>(k));
  model->means.resize(k);
  model->thetas.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    model->means[i] = arms[i].true_mean();
    model->thetas[i] = arms[i].default_theta();
    sd(static_cast<Eigen::Index>(i)) = std::sqrt(arms[i].true_variance());
  }
  if (correlation) {
    validate_correlation(*correlation, k);
    for (const auto& a : arms) {
      if (!a.is_gaussian()) {
        throw std::invalid_argument("correlated environments require Gaussian arms, got " +
                                    a.describe());
      }
    }
    model->factor = psd_factor(*correlation, sd);
    model->covariance = sd.asDiagonal() * (*correlation) * sd.asDiagonal();
  } else {
    model->covariance = sd.array().square().matrix().asDiagonal();
  }
  model->arms = std::move(arms);
  model->correlation = std::move(correlation);
  model_ = std::move(model);
  base_draw_.resize(k);
  normals_.resize(k);
}

BanditEnvironment::BanditEnvironment(std::shared_ptr<const Model> model, std::uint64_t seed)
    : model_(std::move(model)), seed_(seed), rng_(seed) {
  base_draw_.resize(model_->arms.size());
  normals_.resize(model_->arms.size());
}

std::size_t BanditEnvironment::num_arms() const { return model_->means.size(); }
std::size_t BanditEnvironment::num_base_arms() const { return model_->arms.size(); }

void BanditEnvironment::sample_round(std::span<double> out) {
  const auto& m = *model_;
  const auto k = m.arms.size();
  std::normal_distribution<double> normal;
  if (m.correlation) {
    for (std::size_t i = 0; i < k; ++i) normals_[i] = normal(rng_);
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        acc += m.factor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * normals_[j];
      }
      base_draw_[i] = m.arms[i].true_mean() + acc;
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      base_draw_[i] = m.arms[i].is_gaussian() ? m.arms[i].from_standard_normal(normal(rng_))
                                              : m.arms[i].sample(rng_);
    }
  }
  if (!m.mixing) {
    std::copy(base_draw_.begin(), base_draw_.end(), out.begin());
    return;
  }
  const auto& w = *m.mixing;
  for (Eigen::Index p = 0; p < w.rows(); ++p) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.cols(); ++i) acc += w(p, i) * base_draw_[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(p)] = acc;
  }
}

std::vector<double> BanditEnvironment::sample_round() {
  std::vector<double> out(num_arms());
  sample_round(out);
  return out;
}

const std::vector<double>& BanditEnvironment::true_means() const { return model_->means; }

std::vector<double> BanditEnvironment::true_variances() const {
  const auto& c = model_->covariance;
  std::vector<double> v(static_cast<std::size_t>(c.rows()));
  for (Eigen::Index i = 0; i < c.rows(); ++i) v[static_cast<std::size_t>(i)] = c(i, i);
  return v;
}

const Eigen::MatrixXd& BanditEnvironment::covariance() const { return model_->covariance; }
const std::vector<double>& BanditEnvironment::arm_thetas() const { return model_->thetas; }

double BanditEnvironment::common_theta() const {
  return *std::max_element(model_->thetas.begin(), model_->thetas.end());
}

const std::vector<ArmDistribution>& BanditEnvironment::base_arms() const { return model_->arms; }
const std::optional<Eigen::MatrixXd>& BanditEnvironment::correlation() const {
  return model_->correlation;
}
const std::optional<Eigen::MatrixXd>& BanditEnvironment::mixing() const { return model_->mixing; }

BanditEnvironment BanditEnvironment::reseeded(std::uint64_t seed) const {
  return BanditEnvironment(model_, seed);
}

BanditEnvironment BanditEnvironment::with_mixing(const Eigen::MatrixXd& weights,
                                                 std::vector<double> thetas) const {
  auto model = std::make_shared<Model>(*model_);
  // Compose with an existing layer so nested combinations still wrap the base draw.
  const Eigen::MatrixXd total = model_->mixing ? Eigen::MatrixXd(weights * (*model_->mixing)) : weights;
  Eigen::Map<const Eigen::VectorXd> mu(model_->means.data(),
                                       static_cast<Eigen::Index>(model_->means.size()));
  const Eigen::VectorXd new_mu = weights * mu;
  model->means.assign(new_mu.data(), new_mu.data() + new_mu.size());
  model->covariance = weights * model_->covariance * weights.transpose();
  model->mixing = total;
  model->thetas = std::move(thetas);
  return BanditEnvironment(std::move(model), seed_);
}

CombinedEnvironment combine_arms(const BanditEnvironment& env, const Eigen::MatrixXd& weights,
                                 std::span<const double> thetas) {
  const auto k = env.num_arms();
  if (static_cast<std::size_t>(weights.cols()) != k) {
    std::ostringstream os;
    os << "weight matrix has " << weights.cols() << " columns but the environment has " << k
       << " arms";
    throw std::invalid_argument(os.str());
  }
  if (thetas.size() != k) {
    throw std::invalid_argument("need one theta per base arm");
  }
  if (weights.rows() == 0) throw std::invalid_argument("weight matrix has no rows");
  for (Eigen::Index p = 0; p < weights.rows(); ++p) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < weights.cols(); ++i) {
      if (!(weights(p, i) >= 0.0)) {
        throw std::invalid_argument("weight row " + std::to_string(p + 1) +
                                    " has a negative entry");
      }
      sum += weights(p, i);
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("weight row " + std::to_string(p + 1) + " sums to " +
                                  std::to_string(sum) + ", not 1");
    }
  }
  std::vector<double> combined(static_cast<std::size_t>(weights.rows()), 0.0);
  for (Eigen::Index p = 0; p < weights.rows(); ++p) {
    for (Eigen::Index i = 0; i < weights.cols(); ++i) {
      combined[static_cast<std::size_t>(p)] += weights(p, i) * thetas[static_cast<std::size_t>(i)];
    }
  }
  auto out = env.with_mixing(weights, combined);
  return {std::move(out), std::move(combined)};
}

Eigen::MatrixXd equicorrelation(std::size_t k, double tau) {
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, tau);
  c.diagonal().setOnes();
  return c;
}

}  // namespace riskbandit
