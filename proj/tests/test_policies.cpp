#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riskbandit/policies.hpp"
#include "riskbandit/presets.hpp"

using namespace riskbandit;

namespace {

BanditEnvironment five_arms(std::uint64_t seed) {
  std::vector<ArmDistribution> arms;
  const double mu[] = {0.1, 0.3, 0.5, 0.2, 0.45};
  const double s2[] = {0.2, 0.4, 0.9, 0.1, 0.6};
  for (int i = 0; i < 5; ++i) arms.push_back(ArmDistribution::gaussian(mu[i], s2[i]));
  return BanditEnvironment(arms, std::nullopt, seed);
}

}  // namespace

TEST_CASE("initialization plays every arm once in order") {
  for (const char* name : {"ralcb", "mvlcb", "mvucb", "ucb", "egreedy", "uniform"}) {
    auto env = five_arms(1);
    auto policy = make_policy(parse_policy_spec(name), 5, {1.0, 1.0, 100, 3});
    const auto log = run_episode(*policy, env, 5);
    for (std::size_t t = 0; t < 5; ++t) CHECK(log[t].arm.value == t);
    CHECK_THROWS_AS(run_episode(*make_policy(parse_policy_spec(name), 5, {1.0, 1.0, 100, 3}),
                                env, 4),
                    std::invalid_argument);
  }
}

TEST_CASE("pull counts sum to the round count") {
  for (const char* name : {"ralcb", "mvlcb", "mvucb", "ucb", "egreedy", "uniform"}) {
    auto env = five_arms(2);
    auto policy = make_policy(parse_policy_spec(name), 5, {1.0, 1.0, 100, 3});
    const auto log = run_episode(*policy, env, 100);
    std::size_t total = 0;
    for (auto c : policy->state().pull_counts()) total += c;
    CHECK(total == 100);
    CHECK(policy->state().rounds() == 100);
    CHECK(log.counts() == policy->state().pull_counts());
  }
}

TEST_CASE("select_arm before initialization and double observe are errors") {
  RalcbPolicy p(2, {RiskTolerance(0.5), SubGaussianParam(1.0)});
  CHECK_THROWS_AS(p.select_arm(), std::logic_error);
  const auto a = p.next_arm();
  CHECK_THROWS_AS(p.next_arm(), std::logic_error);
  p.observe(a, 0.0);
  CHECK_THROWS_AS(p.observe(a, 0.0), std::logic_error);
  const auto b = p.next_arm();
  CHECK_THROWS_AS(p.observe(a, 0.0), std::logic_error);
  CHECK_THROWS_AS(p.warm_start(a, 0.0), std::logic_error);
  p.observe(b, 1.0);
}

TEST_CASE("RALCB hand-evaluated index at t = 3") {
  const PhiParams params{RiskTolerance(0.5), SubGaussianParam(1.0)};
  RalcbPolicy p(2, params);
  // Arm 1 sees 0 (MV 0); arm 2 sees -0.2 (MV = -0.5 * -0.2 = 0.1).
  p.observe(p.next_arm(), 0.0);
  p.observe(p.next_arm(), -0.2);
  const auto idx = p.indices();
  const double width = oracle::phi(8.0 * std::log(3.0), 0.5, 1.0);
  CHECK(idx[0] == doctest::Approx(0.0 - width));
  CHECK(idx[1] == doctest::Approx(0.1 - width));
  CHECK(p.next_arm().value == 0);
}

TEST_CASE("RALCB prefers the less explored arm when MV estimates agree") {
  const PhiParams params{RiskTolerance(0.5), SubGaussianParam(1.0)};
  RalcbPolicy p(2, params);
  p.warm_start(ArmIndex(0), 1.0);
  for (int i = 0; i < 100; ++i) p.warm_start(ArmIndex(1), 1.0);
  CHECK(p.next_arm().value == 0);
}

TEST_CASE("RALCB at rho = 0 uses the variance-only index") {
  const double theta = 0.7;
  RalcbPolicy p(3, {RiskTolerance(0.0), SubGaussianParam(theta)});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  for (int i = 0; i < 60; ++i) p.warm_start(ArmIndex(static_cast<std::size_t>(i % 3)), z(rng));
  const auto idx = p.indices();
  const double t = 61;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& m = p.state().arm(i);
    const double x = 8.0 * std::log(t) / static_cast<double>(m.count());
    const double expect = m.variance() - 32 * theta * theta * std::max(std::sqrt(x / 2), x) -
                          theta * theta * x;
    CHECK(idx[i] == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("RALCB at rho = 1 chooses exactly like risk-neutral UCB") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto e1 = five_arms(s), e2 = five_arms(s);
    RalcbPolicy r(5, {RiskTolerance(1.0), SubGaussianParam(0.8)});
    UcbPolicy u(5, 0.8);
    CHECK(run_episode(r, e1, 400) == run_episode(u, e2, 400));
  }
}

TEST_CASE("MVLCB index") {
  const double rt = 2.0;
  MvlcbPolicy p(2, rt, 1000);
  p.observe(p.next_arm(), 1.0);
  p.observe(p.next_arm(), 3.0);
  p.warm_start(ArmIndex(0), 2.0);
  const auto idx = p.indices();
  const double w1 = (5 + rt) * std::sqrt(8 * std::log(1000.0) / 2.0);
  const double w2 = (5 + rt) * std::sqrt(8 * std::log(1000.0) / 1.0);
  CHECK(idx[0] == doctest::Approx(0.25 - rt * 1.5 - w1));
  CHECK(idx[1] == doctest::Approx(0.0 - rt * 3.0 - w2));

  MvlcbPolicy d(2, rt, 1000, 0.01);
  d.observe(d.next_arm(), 1.0);
  d.observe(d.next_arm(), 3.0);
  CHECK(d.indices()[1] == doctest::Approx(-6.0 - (5 + rt) * std::sqrt(std::log(100.0))));
  CHECK_THROWS_AS(MvlcbPolicy(2, rt, 0), std::invalid_argument);
}

TEST_CASE("MVUCB and UCB indices") {
  MvucbPolicy m(2, RiskTolerance(0.5), 3.0);
  m.observe(m.next_arm(), 1.0);
  m.observe(m.next_arm(), 2.0);
  CHECK(m.indices()[1] == doctest::Approx(-1.0 - 3.0 * std::sqrt(std::log(3.0))));
  UcbPolicy u(2, 2.0);
  u.observe(u.next_arm(), 1.0);
  u.observe(u.next_arm(), 2.0);
  CHECK(u.indices()[0] == doctest::Approx(-(1.0 + 2.0 * std::sqrt(8 * std::log(3.0)))));
}

TEST_CASE("epsilon-greedy exploits when epsilon is zero, explores when one") {
  EpsilonGreedyPolicy g(3, RiskTolerance(1.0), 0.0);
  g.observe(g.next_arm(), 0.0);
  g.observe(g.next_arm(), 2.0);
  g.observe(g.next_arm(), 1.0);
  for (int i = 0; i < 10; ++i) {
    const auto a = g.next_arm();
    CHECK(a.value == 1);
    g.observe(a, 2.0);
  }
  EpsilonGreedyPolicy e(3, RiskTolerance(1.0), 1.0, TieBreak::Deterministic, 5);
  e.observe(e.next_arm(), 0.0);
  e.observe(e.next_arm(), 2.0);
  e.observe(e.next_arm(), 1.0);
  std::vector<int> seen(3, 0);
  for (int i = 0; i < 300; ++i) {
    const auto a = e.next_arm();
    ++seen[a.value];
    e.observe(a, 0.0);
  }
  for (int c : seen) CHECK(c > 60);
}

TEST_CASE("uniform policy rotates") {
  auto env = five_arms(3);
  UniformPolicy u(5);
  const auto log = run_episode(u, env, 23);
  for (std::size_t t = 0; t < 23; ++t) CHECK(log[t].arm.value == t % 5);
}

TEST_CASE("deterministic ties pick fewest pulls then lowest id") {
  UcbPolicy u(3, 1.0);
  // Identical statistics everywhere, so all three indices tie.
  for (std::size_t i = 0; i < 3; ++i) u.warm_start(ArmIndex(i), 0.5);
  CHECK(u.next_arm().value == 0);
}

TEST_CASE("random tie-breaking reaches every tied arm") {
  std::vector<int> seen(3, 0);
  for (std::uint64_t s = 0; s < 60; ++s) {
    UcbPolicy u(3, 1.0, TieBreak::Random, s);
    for (std::size_t i = 0; i < 3; ++i) u.warm_start(ArmIndex(i), 0.5);
    ++seen[u.next_arm().value];
  }
  for (int c : seen) CHECK(c > 0);
}

TEST_CASE("observing a constant gives MV = -rho c") {
  RalcbPolicy p(1, {RiskTolerance(0.3), SubGaussianParam(1.0)});
  for (int i = 0; i < 20; ++i) p.observe(p.next_arm(), 1.7);
  CHECK(p.state().arm(0).mean_variance(RiskTolerance(0.3)) == doctest::Approx(-0.3 * 1.7));
}

TEST_CASE("interleaved observations match per-arm batch statistics") {
  auto env = five_arms(12);
  RalcbPolicy p(5, {RiskTolerance(0.4), SubGaussianParam(1.0)});
  const auto log = run_episode(p, env, 300);
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<double> x;
    for (const auto& pull : log.pulls()) {
      if (pull.arm.value == i) x.push_back(pull.reward);
    }
    CHECK(p.state().arm(i).mean_variance(RiskTolerance(0.4)) ==
          doctest::Approx(oracle::mv(x, 0.4)).epsilon(1e-11));
  }
}

TEST_CASE("replay and anytime property") {
  const PhiParams params{RiskTolerance::from_tilde(1.0), SubGaussianParam(0.9)};
  auto e1 = five_arms(77), e2 = five_arms(77), e3 = five_arms(77);
  RalcbPolicy a(5, params), b(5, params), c(5, params);
  const auto short_log = run_episode(a, e1, 500);
  const auto long_log = run_episode(b, e2, 1500);
  CHECK(long_log.prefix(500) == short_log);
  auto resumed = run_episode(c, e3, 500);
  continue_episode(c, e3, resumed, 1500);
  CHECK(resumed == long_log);
}

TEST_CASE("policy spec strings") {
  CHECK(parse_policy_spec("ralcb").kind == PolicyKind::Ralcb);
  const auto s = parse_policy_spec("mvlcb:delta=0.01,ties=random");
  CHECK(*s.delta == 0.01);
  CHECK(s.ties == TieBreak::Random);
  CHECK(s.to_string() == "mvlcb:delta=0.01;ties=random");
  CHECK(parse_policy_spec(s.to_string()).to_string() == s.to_string());
  CHECK(parse_policy_spec("egreedy").to_string() == "egreedy:epsilon=0.1");
  CHECK_THROWS_AS(parse_policy_spec("thompson"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("mvlcb:theta=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("mvlcb:delta=1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("egreedy:epsilon=x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("ucb:theta"), std::invalid_argument);
}
