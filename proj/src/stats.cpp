#include "riskbandit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskbandit {

void PullLog::append(ArmIndex arm, double reward) {
  if (arm.value >= counts_.size()) {
    throw std::out_of_range("arm " + std::to_string(arm.one_based()) + " out of range");
  }
  pulls_.push_back({pulls_.size() + 1, arm, reward});
  ++counts_[arm.value];
}

std::vector<RunningMoments> PullLog::arm_moments() const {
  std::vector<RunningMoments> m(counts_.size());
  for (const auto& p : pulls_) m[p.arm.value].push(p.reward);
  return m;
}

PullLog PullLog::prefix(std::size_t n) const {
  PullLog out(counts_.size());
  n = std::min(n, pulls_.size());
  for (std::size_t i = 0; i < n; ++i) out.append(pulls_[i].arm, pulls_[i].reward);
  return out;
}

bool operator==(const PullLog& a, const PullLog& b) {
  if (a.counts_ != b.counts_ || a.pulls_.size() != b.pulls_.size()) return false;
  for (std::size_t i = 0; i < a.pulls_.size(); ++i) {
    const auto& x = a.pulls_[i];
    const auto& y = b.pulls_[i];
    if (x.round != y.round || x.arm != y.arm || x.reward != y.reward) return false;
  }
  return true;
}

TrueArmStats::TrueArmStats(std::vector<double> mu, std::vector<double> sigma2)
    : mu_(std::move(mu)), sigma2_(std::move(sigma2)) {
  if (mu_.empty() || mu_.size() != sigma2_.size()) {
    throw std::invalid_argument("TrueArmStats needs matching, non-empty mu and sigma2");
  }
  for (double s : sigma2_) {
    if (!(s >= 0.0)) throw std::invalid_argument("variances must be >= 0");
  }
}

std::vector<double> TrueArmStats::mv(RiskTolerance rho) const {
  std::vector<double> out(mu_.size());
  const double r = rho.value();
  for (std::size_t i = 0; i < mu_.size(); ++i) out[i] = (1.0 - r) * sigma2_[i] - r * mu_[i];
  return out;
}

double TrueArmStats::min_mv(RiskTolerance rho) const {
  const auto v = mv(rho);
  return *std::min_element(v.begin(), v.end());
}

std::vector<ArmIndex> TrueArmStats::optimal_set(RiskTolerance rho) const {
  constexpr double kTieTol = 1e-12;
  const auto v = mv(rho);
  const double best = *std::min_element(v.begin(), v.end());
  std::vector<ArmIndex> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] - best <= kTieTol) out.emplace_back(i);
  }
  return out;
}

bool TrueArmStats::is_optimal(ArmIndex arm, RiskTolerance rho) const {
  const auto set = optimal_set(rho);
  return std::find(set.begin(), set.end(), arm) != set.end();
}

ArmIndex TrueArmStats::optimal_arm(RiskTolerance rho) const { return optimal_set(rho).front(); }

std::vector<double> TrueArmStats::gaps(RiskTolerance rho, GapConvention convention) const {
  const auto best = optimal_arm(rho).value;
  const double r = rho.value();
  const double var_weight = convention == GapConvention::MeanVariance ? 1.0 - r : 1.0;
  const auto opt = optimal_set(rho);
  std::vector<double> out(mu_.size());
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    out[i] = var_weight * (sigma2_[i] - sigma2_[best]) - r * (mu_[i] - mu_[best]);
  }
  // Optimal arms have gap exactly zero, not a 1e-17 residue.
  for (auto a : opt) out[a.value] = 0.0;
  return out;
}

std::vector<double> TrueArmStats::gamma_max() const {
  const auto [lo, hi] = std::minmax_element(mu_.begin(), mu_.end());
  std::vector<double> out(mu_.size());
  for (std::size_t i = 0; i < mu_.size(); ++i) out[i] = std::max(mu_[i] - *lo, *hi - mu_[i]);
  return out;
}

double empirical_mv_policy(std::span<const double> rewards, RiskTolerance rho) {
  if (rewards.empty()) throw std::invalid_argument("empirical mean-variance of an empty log");
  const double n = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double x : rewards) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : rewards) ss += (x - mean) * (x - mean);
  const double var = ss / n;
  return (1.0 - rho.value()) * var - rho.value() * mean;
}

double empirical_mv_policy(const PullLog& log, RiskTolerance rho) {
  std::vector<double> rewards;
  rewards.reserve(log.size());
  for (const auto& p : log.pulls()) rewards.push_back(p.reward);
  return empirical_mv_policy(rewards, rho);
}

double regret(const PullLog& log, const TrueArmStats& truth, RiskTolerance rho) {
  return empirical_mv_policy(log, rho) - truth.min_mv(rho);
}

RegretDecomposition regret_decomposition(const PullLog& log,
                                         std::span<const RunningMoments> moments,
                                         const TrueArmStats& truth, RiskTolerance rho) {
  if (log.empty()) throw std::invalid_argument("regret decomposition of an empty log");
  const auto k = truth.num_arms();
  if (moments.size() != k || log.num_arms() != k) {
    throw std::invalid_argument("moments, log and true stats disagree on the number of arms");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (moments[i].count() != log.counts()[i]) {
      throw std::invalid_argument("moments are inconsistent with the pull log");
    }
  }
  const double n = static_cast<double>(log.size());
  const double r = rho.value();
  const auto best = truth.optimal_arm(rho).value;
  const double s2_best = truth.sigma2()[best];
  const double mu_best = truth.mu()[best];

  RegretDecomposition out;
  for (std::size_t i = 0; i < k; ++i) {
    if (moments[i].count() == 0) continue;
    const double t_i = static_cast<double>(moments[i].count());
    const double delta_hat =
        (1.0 - r) * (moments[i].variance() - s2_best) - r * (moments[i].mean() - mu_best);
    out.term1 += t_i * delta_hat;
    for (std::size_t h = 0; h < k; ++h) {
      if (h == i || moments[h].count() == 0) continue;
      const double gamma = moments[i].mean() - moments[h].mean();
      out.term2 += t_i * static_cast<double>(moments[h].count()) * gamma * gamma;
    }
  }
  out.term1 /= n;
  out.term2 /= n * n;
  return out;
}

}  // namespace riskbandit
