#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riskbandit/presets.hpp"
#include "riskbandit/stats.hpp"

using namespace riskbandit;

namespace {

TrueArmStats fifteen() {
  std::vector<double> mu, s2;
  for (const auto& a : fifteen_arm_setup()) {
    mu.push_back(a.true_mean());
    s2.push_back(a.true_variance());
  }
  return TrueArmStats(mu, s2);
}

PullLog random_log(std::size_t k, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  PullLog log(k);
  for (std::size_t t = 0; t < n; ++t) {
    const auto a = pick(rng);
    log.append(ArmIndex(a), 0.3 * static_cast<double>(a) + z(rng));
  }
  return log;
}

std::vector<double> rewards_of(const PullLog& log) {
  std::vector<double> r;
  for (const auto& p : log.pulls()) r.push_back(p.reward);
  return r;
}

}  // namespace

TEST_CASE("running moments agree with the two-pass computation") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(3.0, 2.0);
  RunningMoments m;
  std::vector<double> x;
  for (int i = 0; i < 1000; ++i) {
    x.push_back(z(rng));
    m.push(x.back());
  }
  CHECK(m.mean() == doctest::Approx(oracle::mean(x)).epsilon(1e-12));
  CHECK(m.variance() == doctest::Approx(oracle::population_variance(x)).epsilon(1e-12));
  CHECK(m.mean_variance(RiskTolerance(0.3)) == doctest::Approx(oracle::mv(x, 0.3)).epsilon(1e-12));
}

TEST_CASE("empirical MV of a policy") {
  const std::vector<double> same(7, 2.5);
  CHECK(empirical_mv_policy(same, RiskTolerance(0.4)) == doctest::Approx(-0.4 * 2.5));
  const std::vector<double> two{0.0, 2.0};
  CHECK(empirical_mv_policy(two, RiskTolerance(0.0)) == doctest::Approx(1.0));
  PullLog log(2);
  log.append(ArmIndex(0), 1.0);
  log.append(ArmIndex(1), 2.0);
  log.append(ArmIndex(0), 3.0);
  CHECK(empirical_mv_policy(log, RiskTolerance(0.5)) == doctest::Approx(-2.0 / 3.0));
  CHECK_THROWS(empirical_mv_policy(PullLog(2), RiskTolerance(0.5)));
}

TEST_CASE("regret edge cases") {
  TrueArmStats truth({0.2, 0.7}, {1.0, 0.5});
  PullLog opt(2);
  for (int i = 0; i < 5; ++i) opt.append(ArmIndex(1), 0.7);
  CHECK(regret(opt, truth, RiskTolerance(1.0)) == doctest::Approx(0.0));

  PullLog one(2);
  one.append(ArmIndex(0), 0.35);
  CHECK(regret(one, truth, RiskTolerance(1.0)) == doctest::Approx(0.7 - 0.35));

  // Regret is signed: a lucky run can beat the best arm.
  PullLog lucky(2);
  lucky.append(ArmIndex(1), 2.0);
  CHECK(regret(lucky, truth, RiskTolerance(1.0)) < 0.0);
}

TEST_CASE("fifteen-arm setup: optimal arms and values") {
  const auto truth = fifteen();
  CHECK(truth.optimal_arm(RiskTolerance::from_tilde(1e-3)).one_based() == 1);
  CHECK(truth.optimal_arm(RiskTolerance::from_tilde(1.0)).one_based() == 11);
  CHECK(truth.optimal_arm(RiskTolerance::from_tilde(1e3)).one_based() == 15);
  CHECK(truth.min_mv(RiskTolerance(0.5)) == doctest::Approx(-0.155).epsilon(1e-12));
  // mv in the rho_tilde scale: sigma^2 - rho_tilde mu
  CHECK(0.24 - 1.0 * 0.55 == doctest::Approx(-0.31));
}

TEST_CASE("argmin is the same in the rho and rho_tilde scales") {
  const auto truth = fifteen();
  for (double rt : {0.0, 0.001, 0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0, 1e4}) {
    const auto rho = RiskTolerance::from_tilde(rt);
    const auto mv = truth.mv(rho);
    for (std::size_t i = 0; i < mv.size(); ++i) {
      const double tilde = truth.sigma2()[i] - rt * truth.mu()[i];
      CHECK(mv[i] == doctest::Approx(tilde / (1.0 + rt)).epsilon(1e-12));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < mv.size(); ++i) {
      if (truth.sigma2()[i] - rt * truth.mu()[i] < truth.sigma2()[best] - rt * truth.mu()[best]) {
        best = i;
      }
    }
    CHECK(truth.optimal_arm(rho).value == best);
  }
}

TEST_CASE("gaps vanish exactly on optimal arms") {
  TrueArmStats truth({0.5, 0.5, 0.1}, {0.2, 0.2, 0.2});
  const auto g = truth.gaps(RiskTolerance(0.5));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(g[2] == doctest::Approx(0.2));
  CHECK(truth.optimal_set(RiskTolerance(0.5)).size() == 2);
  const auto gm = truth.gamma_max();
  CHECK(gm[0] == doctest::Approx(0.4));
  CHECK(gm[2] == doctest::Approx(0.4));

  // Variance term weighted by (1 - rho) or not at all.
  TrueArmStats spread({0.5, 0.5}, {0.2, 0.6});
  CHECK(spread.gaps(RiskTolerance(0.25))[1] == doctest::Approx(0.75 * 0.4));
  CHECK(spread.gaps(RiskTolerance(0.25), GapConvention::UnscaledVariance)[1] ==
        doctest::Approx(0.4));
}

TEST_CASE("regret decomposition") {
  TrueArmStats truth({0.0, 0.3}, {1.0, 1.0});
  const RiskTolerance rho(0.5);

  SUBCASE("one arm only") {
    PullLog log(2);
    for (double r : {0.1, -0.4, 1.2}) log.append(ArmIndex(0), r);
    const auto m = log.arm_moments();
    CHECK(regret_decomposition(log, m, truth, rho).term2 == 0.0);
  }
  SUBCASE("equal empirical means") {
    PullLog log(2);
    log.append(ArmIndex(0), 1.0);
    log.append(ArmIndex(1), 0.0);
    log.append(ArmIndex(1), 2.0);
    const auto m = log.arm_moments();
    CHECK(regret_decomposition(log, m, truth, rho).term2 == doctest::Approx(0.0));
  }
  SUBCASE("upper bound holds on 100 random logs, and the identity is exact") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto log = random_log(2, 10, s);
      const auto m = log.arm_moments();
      for (double r : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        const RiskTolerance rr(r);
        const auto d = regret_decomposition(log, m, truth, rr);
        const double reg = regret(log, truth, rr);
        CHECK(d.total() >= reg - 1e-12);
        CHECK(d.term1 + 0.5 * (1.0 - r) * d.term2 == doctest::Approx(reg).epsilon(1e-10));
      }
    }
  }
  SUBCASE("moments must match the log") {
    PullLog log(2);
    log.append(ArmIndex(0), 1.0);
    std::vector<RunningMoments> wrong(2);
    CHECK_THROWS(regret_decomposition(log, wrong, truth, rho));
  }
}

TEST_CASE("regret tracker matches prefix recomputation") {
  TrueArmStats truth({0.0, 0.3, 0.6}, {1.0, 0.5, 2.0});
  const auto log = random_log(3, 200, 99);
  const RiskTolerance rho(0.3);
  RegretTracker tracker(rho, truth.min_mv(rho));
  const auto r = rewards_of(log);
  for (std::size_t t = 1; t <= log.size(); ++t) {
    const double fast = tracker.push(r[t - 1]);
    CHECK(fast == doctest::Approx(regret(log.prefix(t), truth, rho)).epsilon(1e-10));
  }
}

TEST_CASE("rho conversions") {
  CHECK(rho_from_tilde(1.0).value() == 0.5);
  CHECK(rho_from_tilde(0.0).value() == 0.0);
  CHECK(rho_from_tilde(1e3).value() == doctest::Approx(1000.0 / 1001.0));
  CHECK(rho_from_tilde(INFINITY).value() == 1.0);
  CHECK(RiskTolerance(0.25).tilde() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(rho_from_tilde(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(RiskTolerance(1.5), std::invalid_argument);
  CHECK_THROWS_AS(SubGaussianParam(0.0), std::invalid_argument);
}

TEST_CASE("pull log bookkeeping") {
  const auto log = random_log(4, 100, 3);
  std::size_t total = 0;
  for (auto c : log.counts()) total += c;
  CHECK(total == 100);
  CHECK(log[0].round == 1);
  CHECK(log[99].round == 100);
  const auto p = log.prefix(40);
  CHECK(p.size() == 40);
  CHECK(p == log.prefix(40));
  CHECK_FALSE(p == log);
  const auto m = log.arm_moments();
  for (std::size_t i = 0; i < 4; ++i) CHECK(m[i].count() == log.counts()[i]);
}
