#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "riskbandit/confidence.hpp"
#include "riskbandit/presets.hpp"

using namespace riskbandit;

namespace {

PhiParams params(double rho, double theta) { return {RiskTolerance(rho), SubGaussianParam(theta)}; }

TrueArmStats fifteen() {
  std::vector<double> mu, s2;
  for (const auto& a : fifteen_arm_setup()) {
    mu.push_back(a.true_mean());
    s2.push_back(a.true_variance());
  }
  return TrueArmStats(mu, s2);
}

}  // namespace

TEST_CASE("phi worked values") {
  CHECK(phi(0.0, params(0.3, 2.0)) == 0.0);
  CHECK(phi(4.0, params(1.0, 2.0)) == doctest::Approx(4.0));
  CHECK(phi(2.0, params(0.5, 1.0)) == doctest::Approx(33.0 + std::numbers::sqrt2 / 2.0));
  CHECK_THROWS_AS(phi(-1.0, params(0.5, 1.0)), std::invalid_argument);
}

TEST_CASE("phi matches the reference formula") {
  for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double theta : {0.1, 1.0, 5.0}) {
      for (double x : {1e-8, 0.01, 0.3, 0.5, 0.7, 3.0, 1e4}) {
        CHECK(phi(x, params(rho, theta)) ==
              doctest::Approx(oracle::phi(x, rho, theta)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("phi is strictly increasing") {
  for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double theta : {0.1, 1.0, 5.0}) {
      const auto p = params(rho, theta);
      double prev = phi(0.0, p);
      for (int i = 1; i <= 1000; ++i) {
        const double v = phi(0.005 * i, p);
        REQUIRE(v > prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("phi as a function of theta at fixed x") {
  // The sqrt(x/2) and x terms scale with theta^2, the mean term with theta.
  for (double rho : {0.0, 0.5, 0.9}) {
    double prev = 0.0;
    for (double theta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const double v = phi(0.3, params(rho, theta));
      CHECK(v > prev);
      prev = v;
    }
  }
  // Inverse side: a smaller theta gives a larger phi_inverse at fixed v.
  for (double rho : {0.0, 0.5, 0.9}) {
    double prev = INFINITY;
    for (double theta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const double x = phi_inverse(0.7, params(rho, theta));
      CHECK(x < prev);
      prev = x;
    }
  }
}

TEST_CASE("phi_inverse worked values") {
  CHECK(phi_inverse(0.0, params(0.4, 1.0)) == 0.0);
  CHECK(phi_inverse(4.0, params(1.0, 2.0)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(phi_inverse(-1e-3, params(0.5, 1.0)), std::invalid_argument);
}

TEST_CASE("phi_inverse round trip against a bisection oracle") {
  for (double rho : {0.0, 0.3, 0.9, 1.0, 1.0 - 1e-12}) {
    for (double theta : {0.5, 1.0, 3.0}) {
      const auto p = params(rho, theta);
      for (int i = 0; i < 200; ++i) {
        const double v = std::pow(10.0, -6.0 + 9.0 * i / 199.0);
        const double x = phi_inverse(v, p);
        REQUIRE(std::abs(phi(x, p) - v) / std::max(v, 1e-12) < 1e-10);
        const double ref = oracle::phi_inverse(v, rho, theta);
        REQUIRE(std::abs(x - ref) <= 1e-9 * std::max(ref, 1e-300));
        REQUIRE(phi_inverse(phi(x, p), p) == doctest::Approx(x).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("phi_inverse is continuous at the branch point") {
  for (double rho : {0.0, 0.3, 0.9}) {
    const auto p = params(rho, 1.3);
    const double vb = phi(0.5, p);
    CHECK(phi_inverse(std::nextafter(vb, 0.0), p) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(phi_inverse(vb, p) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("mean concentration bound") {
  CHECK(mean_conc_bound(2, 2.0 / std::exp(2.0), 1.0) == doctest::Approx(std::sqrt(2.0)));
  const double b = mean_conc_bound(10, 0.05, 1.7);
  CHECK(mean_conc_bound(40, 0.05, 1.7) == doctest::Approx(b / 2.0));
  CHECK(mean_conc_bound(10, 0.05, 0.0) == 0.0);
  CHECK_THROWS_AS(mean_conc_bound(0, 0.05, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mean_conc_bound(10, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mean_conc_bound(10, 2.5, 1.0), std::invalid_argument);
}

TEST_CASE("variance concentration bound") {
  // log(2/delta)/n = 1
  CHECK(var_conc_bound(1, 2.0 / std::exp(1.0), 1.5) == doctest::Approx(64 * 2.25));
  // log(2/delta)/n = 1/4
  CHECK(var_conc_bound(4, 2.0 / std::exp(1.0), 1.5) == doctest::Approx(16 * 2.25));
  CHECK(var_conc_bound(4, 0.1, 0.0) == 0.0);
}

TEST_CASE("mean-variance concentration bound") {
  CHECK(mv_conc_bound(10, 2.0, params(0.5, 1.0)) == 0.0);
  CHECK(mv_conc_bound(13, 0.02, params(1.0, 0.8)) == doctest::Approx(mean_conc_bound(13, 0.02, 0.8)));
  CHECK(mv_conc_bound(8, 2.0 / std::exp(4.0), params(0.5, 1.0)) == doctest::Approx(17.0));
}

TEST_CASE("expected pull bound") {
  const auto truth = fifteen();
  const auto p = PhiParams{RiskTolerance(0.5), SubGaussianParam(std::sqrt(0.85))};
  CHECK(expected_pull_bound(1, ArmIndex(0), truth, p) == doctest::Approx(5.0));
  CHECK_THROWS_AS(expected_pull_bound(100, ArmIndex(10), truth, p), std::domain_error);

  const double frozen = expected_pull_bound(10000, ArmIndex(14), truth, p);
  // Independent recomputation through the bisection oracle.
  const double gap = 0.5 * (0.85 - 0.24) - 0.5 * (0.79 - 0.55);
  const double ref = 8.0 * std::log(1e4) / oracle::phi_inverse(gap / 2.0, 0.5, std::sqrt(0.85)) + 5.0;
  CHECK(frozen == doctest::Approx(ref).epsilon(1e-9));
  CHECK(frozen == doctest::Approx(875260.80698514322).epsilon(1e-12));

  // Decreasing in the gap, approaching 5.
  double prev = INFINITY;
  for (double s2 : {0.2, 1.0, 10.0, 1e3, 1e6}) {
    TrueArmStats t({0.0, 0.0}, {0.1, s2});
    const double b = expected_pull_bound(1000, ArmIndex(1), t, params(0.5, 1.0));
    CHECK(b < prev);
    CHECK(b > 5.0);
    prev = b;
  }
  CHECK(prev < 5.1);
}

TEST_CASE("expected regret bound") {
  TrueArmStats same({0.3, 0.3, 0.3}, {0.2, 0.2, 0.2});
  const auto p = params(0.5, 1.0);
  CHECK(expected_regret_bound(100, same, p) == doctest::Approx(5.0 * 0.6 / 100.0));
  CHECK_THROWS_AS(expected_regret_bound(2, same, p), std::invalid_argument);

  const auto truth = fifteen();
  const auto q = PhiParams{RiskTolerance(0.5), SubGaussianParam(std::sqrt(0.85))};
  const double b4 = expected_regret_bound(10000, truth, q);
  const double b8 = expected_regret_bound(100000000, truth, q);
  CHECK(std::isfinite(b4));
  CHECK(b4 > 0.0);
  // The bound is A log(n)/n + C/n, so the ratio lies between 1e-4 (log-free)
  // and 1e-4 * log(1e8)/log(1e4) = 2e-4.
  CHECK(b8 / b4 > 1e-4);
  CHECK(b8 / b4 <= 2e-4 + 1e-12);

  double prev = INFINITY;
  for (std::size_t n = 15; n <= 200000; n = n * 3 / 2) {
    const double b = expected_regret_bound(n, truth, q);
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("gap convention changes only the first sum") {
  const auto truth = fifteen();
  const auto p = PhiParams{RiskTolerance(0.5), SubGaussianParam(std::sqrt(0.85))};
  const double mvb = expected_regret_bound(10000, truth, p, GapConvention::MeanVariance);
  CHECK(std::isfinite(mvb));
  // Arm 4 has a lower variance than arm 11, so its unscaled gap goes negative.
  CHECK_THROWS_AS(expected_regret_bound(10000, truth, p, GapConvention::UnscaledVariance),
                  std::domain_error);
  TrueArmStats spread({0.5, 0.1}, {0.2, 0.6});
  const double a = expected_regret_bound(10000, spread, p, GapConvention::MeanVariance);
  const double b = expected_regret_bound(10000, spread, p, GapConvention::UnscaledVariance);
  CHECK(a != b);
  CHECK(std::isfinite(b));
}

TEST_CASE("high-probability bound") {
  const auto truth = fifteen();
  const auto p = PhiParams{RiskTolerance(0.5), SubGaussianParam(std::sqrt(0.85))};
  const auto hp = high_prob_regret_bound(30000, truth, p);
  CHECK(std::isfinite(hp.bound));
  CHECK_FALSE(hp.vacuous);
  CHECK(hp.confidence == doctest::Approx(1.0 - 15.0 / 2.7e13));

  TrueArmStats two({0.0, 0.5}, {1.0, 1.0});
  const auto small = high_prob_regret_bound(2, two, params(0.5, 1.0));
  CHECK_FALSE(small.vacuous);  // K/n^3 = 1/4
  TrueArmStats many(std::vector<double>(9, 0.0), std::vector<double>(9, 1.0));
  const auto v = high_prob_regret_bound(9, many, params(0.5, 1.0));
  CHECK_FALSE(v.vacuous);
  TrueArmStats one({0.0}, {1.0});
  const auto vac = high_prob_regret_bound(1, one, params(0.5, 1.0));
  CHECK(vac.vacuous);
  CHECK(vac.confidence == 0.0);

  // rho = 1 keeps only mean-driven terms.
  const auto q = params(1.0, 2.0);
  const auto r1 = high_prob_regret_bound(1000, two, q);
  const double l = std::log(1000.0);
  const double gap = 0.5;
  const double pulls = 8 * l / std::pow(gap / 2 / 2.0, 2) + 5;
  const double expected = (pulls * (gap + 2 * 0.25)) / 1000.0 +
                          2.0 * std::sqrt(8 * 2 * l / 1000.0) / 2.0 +
                          16 * std::numbers::sqrt2 * 2 * 2.0 * l / 1000.0;
  CHECK(r1.bound == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bound report marks optimal arms") {
  const auto truth = fifteen();
  const auto p = PhiParams{RiskTolerance(0.5), SubGaussianParam(std::sqrt(0.85))};
  const auto r = bound_report(10000, truth, p);
  CHECK(std::isnan(r.per_arm_pull_bound[10]));
  for (std::size_t i = 0; i < 15; ++i) {
    if (i != 10) CHECK(r.per_arm_pull_bound[i] > 5.0);
  }
  CHECK(r.expected_regret_bound == expected_regret_bound(10000, truth, p));
}

TEST_CASE("concentration bounds hold empirically (small batch count)") {
  // Reduced version of the acceptance check: 2000 batches.
  std::mt19937_64 rng(123);
  std::normal_distribution<double> z;
  const std::size_t n = 20;
  const double delta = 0.1;
  const int m = 2000;
  int v7 = 0, v8 = 0, v11 = 0;
  const auto p = params(0.5, 1.0);
  for (int b = 0; b < m; ++b) {
    std::vector<double> x(n);
    for (auto& v : x) v = z(rng);
    const double mu = oracle::mean(x);
    const double s2 = oracle::population_variance(x);
    v7 += std::abs(mu) > mean_conc_bound(n, delta, 1.0);
    v8 += std::abs(s2 - 1.0 + mu * mu) > var_conc_bound(n, delta, 1.0);
    v11 += std::abs(0.5 * s2 - 0.5 * mu - 0.5) > mv_conc_bound(n, delta, p);
  }
  const double slack = delta + 3.0 * std::sqrt(delta / m);
  CHECK(v7 / double(m) <= slack);
  CHECK(v8 / double(m) <= slack);
  CHECK(v11 / double(m) <= slack);
}
