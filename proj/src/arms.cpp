#include "riskbandit/arms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace riskbandit {
namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Below this retained probability mass, rejection sampling is too slow.
constexpr double kMinTruncatedMass = 1e-4;

}  // namespace

ArmDistribution::ArmDistribution(GaussianArm g) : kind_(g) {
  if (!(g.sigma2 >= 0.0) || !std::isfinite(g.mu) || !std::isfinite(g.sigma2)) {
    throw std::invalid_argument("Gaussian arm needs finite mu and sigma2 >= 0");
  }
  mean_ = g.mu;
  variance_ = g.sigma2;
}

ArmDistribution::ArmDistribution(TruncatedGaussianArm tg) : kind_(tg) {
  if (!(tg.sigma2 > 0.0) || !(tg.lo < tg.hi) || !std::isfinite(tg.mu)) {
    throw std::invalid_argument("truncated Gaussian arm needs sigma2 > 0 and lo < hi");
  }
  const double sigma = std::sqrt(tg.sigma2);
  const double a = (tg.lo - tg.mu) / sigma;
  const double b = (tg.hi - tg.mu) / sigma;
  const double mass = normal_cdf(b) - normal_cdf(a);
  if (mass < kMinTruncatedMass) {
    throw std::invalid_argument("truncated Gaussian arm retains too little probability mass");
  }
  const double pa = normal_pdf(a);
  const double pb = normal_pdf(b);
  // a*pdf(a) -> 0 as a -> -inf; guard the inf*0 case.
  const double apa = std::isfinite(a) ? a * pa : 0.0;
  const double bpb = std::isfinite(b) ? b * pb : 0.0;
  const double shift = (pa - pb) / mass;
  mean_ = tg.mu + sigma * shift;
  variance_ = tg.sigma2 * (1.0 + (apa - bpb) / mass - shift * shift);
}

ArmDistribution::ArmDistribution(ScaledBernoulliArm b) : kind_(b) {
  if (!(b.lo < b.hi) || !(b.p >= 0.0 && b.p <= 1.0)) {
    throw std::invalid_argument("scaled Bernoulli arm needs lo < hi and p in [0, 1]");
  }
  const double w = b.hi - b.lo;
  mean_ = b.lo + w * b.p;
  variance_ = w * w * b.p * (1.0 - b.p);
}

double ArmDistribution::default_theta() const {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianArm>) {
          return std::sqrt(k.sigma2);
        } else if constexpr (std::is_same_v<T, TruncatedGaussianArm>) {
          return std::min(std::sqrt(k.sigma2), 0.5 * (k.hi - k.lo));
        } else {
          return 0.5 * (k.hi - k.lo);
        }
      },
      kind_);
}

std::string ArmDistribution::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianArm>) {
          os << "gaussian(mu=" << k.mu << ", sigma2=" << k.sigma2 << ")";
        } else if constexpr (std::is_same_v<T, TruncatedGaussianArm>) {
          os << "truncated_gaussian(mu=" << k.mu << ", sigma2=" << k.sigma2 << ", lo=" << k.lo
             << ", hi=" << k.hi << ")";
        } else {
          os << "bernoulli(lo=" << k.lo << ", hi=" << k.hi << ", p=" << k.p << ")";
        }
      },
      kind_);
  return os.str();
}

double ArmDistribution::sample(std::mt19937_64& rng) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianArm>) {
          std::normal_distribution<double> z;
          return k.mu + std::sqrt(k.sigma2) * z(rng);
        } else if constexpr (std::is_same_v<T, TruncatedGaussianArm>) {
          std::normal_distribution<double> z;
          const double sigma = std::sqrt(k.sigma2);
          for (;;) {
            const double x = k.mu + sigma * z(rng);
            if (x >= k.lo && x <= k.hi) return x;
          }
        } else {
          std::bernoulli_distribution coin(k.p);
          return coin(rng) ? k.hi : k.lo;
        }
      },
      kind_);
}

double ArmDistribution::from_standard_normal(double z) const {
  const auto* g = std::get_if<GaussianArm>(&kind_);
  if (g == nullptr) throw std::logic_error("from_standard_normal requires a Gaussian arm");
  return g->mu + std::sqrt(g->sigma2) * z;
}

}  // namespace riskbandit
