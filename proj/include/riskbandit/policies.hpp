#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "riskbandit/confidence.hpp"
#include "riskbandit/environment.hpp"
#include "riskbandit/stats.hpp"
#include "riskbandit/types.hpp"

namespace riskbandit {

enum class PolicyKind { Ralcb, Mvlcb, Mvucb, Ucb, EpsilonGreedy, Uniform };
enum class TieBreak { Deterministic, Random };

std::string_view to_string(PolicyKind kind);

/// Declarative policy description, as found in config files:
/// `ralcb`, `mvlcb:delta=1e-6`, `mvucb:b=3`, `egreedy:epsilon=0.05`,
/// `ucb:theta=0.5`, `uniform`, optionally with `ties=random`.
struct PolicySpec {
  PolicyKind kind = PolicyKind::Ralcb;
  std::optional<double> theta;    // overrides the scenario theta (ralcb, ucb)
  std::optional<double> b;        // mvucb bonus scale; default 5 + rho_tilde
  std::optional<double> delta;    // mvlcb confidence; default n^-8
  double epsilon = 0.1;           // egreedy
  TieBreak ties = TieBreak::Deterministic;

  /// Canonical text form; parse_policy_spec(to_string()) round-trips.
  std::string to_string() const;
  /// Short label used in output files (the kind name).
  std::string label() const { return std::string(riskbandit::to_string(kind)); }
};

PolicySpec parse_policy_spec(std::string_view text);

/// Scenario-level inputs a policy is built against.
struct PolicyContext {
  double rho_tilde = 1.0;
  double theta = 1.0;
  /// Needed by MVLCB only; 0 means unknown.
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
};

/// Everything a policy knows: per-arm moments of its own observations and
/// the number of completed rounds.
class PolicyState {
 public:
  explicit PolicyState(std::size_t num_arms) : moments_(num_arms) {}

  std::size_t num_arms() const { return moments_.size(); }
  std::size_t rounds() const { return rounds_; }
  const RunningMoments& arm(std::size_t i) const { return moments_[i]; }
  const std::vector<RunningMoments>& moments() const { return moments_; }
  std::size_t pulls(std::size_t i) const { return moments_[i].count(); }
  std::vector<std::size_t> pull_counts() const;
  bool initialized() const;

  void record(ArmIndex arm, double reward) {
    moments_[arm.value].push(reward);
    ++rounds_;
  }

 private:
  std::vector<RunningMoments> moments_;
  std::size_t rounds_ = 0;
};

/// Sequential decision interface. A round is next_arm() (or select_arm())
/// followed by exactly one observe() of the chosen arm's reward; the policy
/// never sees the other coordinates of the reward vector.
class Policy {
 public:
  Policy(std::size_t num_arms, TieBreak ties, std::uint64_t seed);
  virtual ~Policy() = default;
  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  virtual std::string name() const = 0;

  std::size_t num_arms() const { return state_.num_arms(); }
  const PolicyState& state() const { return state_; }

  /// Rounds 1..K play arm t; afterwards defers to select_arm().
  ArmIndex next_arm();
  /// Index-based choice for round t = rounds() + 1. Requires every arm to
  /// have been pulled at least once.
  ArmIndex select_arm();
  void observe(ArmIndex arm, double reward);
  /// Feeds an observation that was not chosen by this policy (e.g. a
  /// warm-up rotation). Not allowed while a selection is pending.
  void warm_start(ArmIndex arm, double reward);

  /// Index vector for round t = rounds() + 1; lower is better.
  std::vector<double> indices() const;

 protected:
  /// Lower index wins.
  virtual double index(std::size_t arm, std::size_t t) const = 0;
  /// Lets a policy bypass the index argmin for this round.
  virtual std::optional<ArmIndex> forced_choice(std::size_t /*t*/) { return std::nullopt; }
  std::mt19937_64& rng() { return rng_; }

 private:
  ArmIndex argmin(const std::vector<double>& values);

  PolicyState state_;
  TieBreak ties_;
  std::mt19937_64 rng_;
  std::optional<ArmIndex> pending_;
};

/// Risk-aware lower confidence bound: argmin MV_hat_i - phi(8 log t / T_i).
/// Anytime: does not need the horizon.
class RalcbPolicy final : public Policy {
 public:
  RalcbPolicy(std::size_t num_arms, PhiParams params, TieBreak ties = TieBreak::Deterministic,
              std::uint64_t seed = 0);
  std::string name() const override { return "ralcb"; }
  const PhiParams& params() const { return params_; }

 protected:
  double index(std::size_t arm, std::size_t t) const override;

 private:
  PhiParams params_;
};

/// Horizon-dependent benchmark: argmin (s_hat^2 - rt mu_hat) - (5 + rt) sqrt(log(1/delta) / T_i),
/// with log(1/delta) = 8 log n by default.
class MvlcbPolicy final : public Policy {
 public:
  MvlcbPolicy(std::size_t num_arms, double rho_tilde, std::size_t horizon,
              std::optional<double> delta = std::nullopt, TieBreak ties = TieBreak::Deterministic,
              std::uint64_t seed = 0);
  std::string name() const override { return "mvlcb"; }

 protected:
  double index(std::size_t arm, std::size_t t) const override;

 private:
  double rho_tilde_;
  double log_inv_delta_;
};

/// argmin MV_hat_i - b sqrt(log t / T_i).
class MvucbPolicy final : public Policy {
 public:
  MvucbPolicy(std::size_t num_arms, RiskTolerance rho, double b,
              TieBreak ties = TieBreak::Deterministic, std::uint64_t seed = 0);
  std::string name() const override { return "mvucb"; }

 protected:
  double index(std::size_t arm, std::size_t t) const override;

 private:
  RiskTolerance rho_;
  double b_;
};

/// Risk-neutral UCB: argmax mu_hat_i + theta sqrt(8 log t / T_i).
class UcbPolicy final : public Policy {
 public:
  UcbPolicy(std::size_t num_arms, double theta, TieBreak ties = TieBreak::Deterministic,
            std::uint64_t seed = 0);
  std::string name() const override { return "ucb"; }

 protected:
  /// Negated so that the shared argmin applies.
  double index(std::size_t arm, std::size_t t) const override;

 private:
  double theta_;
};

/// With probability epsilon a uniform arm, else argmin MV_hat_i.
class EpsilonGreedyPolicy final : public Policy {
 public:
  EpsilonGreedyPolicy(std::size_t num_arms, RiskTolerance rho, double epsilon,
                      TieBreak ties = TieBreak::Deterministic, std::uint64_t seed = 0);
  std::string name() const override { return "egreedy"; }

 protected:
  double index(std::size_t arm, std::size_t t) const override;
  std::optional<ArmIndex> forced_choice(std::size_t t) override;

 private:
  RiskTolerance rho_;
  double epsilon_;
};

/// Round-robin baseline.
class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(std::size_t num_arms, std::uint64_t seed = 0);
  std::string name() const override { return "uniform"; }

 protected:
  double index(std::size_t arm, std::size_t t) const override;
  std::optional<ArmIndex> forced_choice(std::size_t t) override;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t num_arms,
                                    const PolicyContext& ctx);

/// Plays rounds 1..n: arms 1..K in order, then the policy's choices.
/// Throws std::invalid_argument when n < K.
PullLog run_episode(Policy& policy, BanditEnvironment& env, std::size_t n);

/// Continues an episode until log.size() == n.
void continue_episode(Policy& policy, BanditEnvironment& env, PullLog& log, std::size_t n);

}  // namespace riskbandit
