#include "riskbandit/policies.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riskbandit {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Ralcb: return "ralcb";
    case PolicyKind::Mvlcb: return "mvlcb";
    case PolicyKind::Mvucb: return "mvucb";
    case PolicyKind::Ucb: return "ucb";
    case PolicyKind::EpsilonGreedy: return "egreedy";
    case PolicyKind::Uniform: return "uniform";
  }
  return "unknown";
}

namespace {

double parse_number(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("policy parameter '" + std::string(key) + "' is not a number: '" +
                                std::string(text) + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// 8 log(t) / T, the shared exploration argument of RALCB and UCB.
double exploration_arg(std::size_t t, std::size_t pulls) {
  return 8.0 * std::log(static_cast<double>(t)) / static_cast<double>(pulls);
}

}  // namespace

std::string PolicySpec::to_string() const {
  std::string out(riskbandit::to_string(kind));
  std::vector<std::string> params;
  if (theta) params.push_back("theta=" + format_number(*theta));
  if (b) params.push_back("b=" + format_number(*b));
  if (delta) params.push_back("delta=" + format_number(*delta));
  if (kind == PolicyKind::EpsilonGreedy) params.push_back("epsilon=" + format_number(epsilon));
  if (ties == TieBreak::Random) params.emplace_back("ties=random");
  for (std::size_t i = 0; i < params.size(); ++i) out += (i == 0 ? ":" : ";") + params[i];
  return out;
}

PolicySpec parse_policy_spec(std::string_view text) {
  PolicySpec spec;
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  if (name == "ralcb") spec.kind = PolicyKind::Ralcb;
  else if (name == "mvlcb") spec.kind = PolicyKind::Mvlcb;
  else if (name == "mvucb") spec.kind = PolicyKind::Mvucb;
  else if (name == "ucb") spec.kind = PolicyKind::Ucb;
  else if (name == "egreedy") spec.kind = PolicyKind::EpsilonGreedy;
  else if (name == "uniform") spec.kind = PolicyKind::Uniform;
  else throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
  if (colon == std::string_view::npos) return spec;

  auto rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find_first_of(",;");
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("policy parameter '" + std::string(item) + "' lacks '='");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "ties") {
      if (value == "random") spec.ties = TieBreak::Random;
      else if (value == "deterministic") spec.ties = TieBreak::Deterministic;
      else throw std::invalid_argument("ties must be 'random' or 'deterministic'");
    } else if (key == "theta" && (spec.kind == PolicyKind::Ralcb || spec.kind == PolicyKind::Ucb)) {
      spec.theta = parse_number(key, value);
    } else if (key == "b" && spec.kind == PolicyKind::Mvucb) {
      spec.b = parse_number(key, value);
    } else if (key == "delta" && spec.kind == PolicyKind::Mvlcb) {
      spec.delta = parse_number(key, value);
      if (!(*spec.delta > 0.0 && *spec.delta < 1.0)) {
        throw std::invalid_argument("mvlcb delta must lie in (0, 1)");
      }
    } else if (key == "epsilon" && spec.kind == PolicyKind::EpsilonGreedy) {
      spec.epsilon = parse_number(key, value);
      if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0)) {
        throw std::invalid_argument("egreedy epsilon must lie in [0, 1]");
      }
    } else {
      throw std::invalid_argument("policy '" + std::string(name) + "' has no parameter '" +
                                  std::string(key) + "'");
    }
  }
  return spec;
}

std::vector<std::size_t> PolicyState::pull_counts() const {
  std::vector<std::size_t> out(moments_.size());
  for (std::size_t i = 0; i < moments_.size(); ++i) out[i] = moments_[i].count();
  return out;
}

bool PolicyState::initialized() const {
  for (const auto& m : moments_) {
    if (m.count() == 0) return false;
  }
  return true;
}

Policy::Policy(std::size_t num_arms, TieBreak ties, std::uint64_t seed)
    : state_(num_arms), ties_(ties), rng_(seed) {
  if (num_arms == 0) throw std::invalid_argument("a policy needs at least one arm");
}

ArmIndex Policy::next_arm() {
  const auto t = state_.rounds() + 1;
  if (t <= num_arms()) {
    if (pending_) throw std::logic_error("previous selection was never observed");
    pending_ = ArmIndex(t - 1);
    return *pending_;
  }
  return select_arm();
}

ArmIndex Policy::select_arm() {
  if (pending_) throw std::logic_error("previous selection was never observed");
  if (!state_.initialized()) {
    throw std::logic_error("select_arm called before every arm was pulled once");
  }
  const auto t = state_.rounds() + 1;
  if (auto forced = forced_choice(t)) {
    pending_ = forced;
    return *forced;
  }
  pending_ = argmin(indices());
  return *pending_;
}

void Policy::observe(ArmIndex arm, double reward) {
  if (!pending_) throw std::logic_error("observe without a pending selection");
  if (*pending_ != arm) {
    throw std::logic_error("observed arm " + std::to_string(arm.one_based()) +
                           " but arm " + std::to_string(pending_->one_based()) + " was selected");
  }
  pending_.reset();
  state_.record(arm, reward);
}

void Policy::warm_start(ArmIndex arm, double reward) {
  if (pending_) throw std::logic_error("warm_start while a selection is pending");
  if (arm.value >= num_arms()) throw std::out_of_range("arm index out of range");
  state_.record(arm, reward);
}

std::vector<double> Policy::indices() const {
  const auto t = state_.rounds() + 1;
  std::vector<double> out(num_arms());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = index(i, t);
  return out;
}

ArmIndex Policy::argmin(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best] ||
        (values[i] == values[best] && state_.pulls(i) < state_.pulls(best))) {
      best = i;
    }
  }
  if (ties_ == TieBreak::Random) {
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == values[best]) tied.push_back(i);
    }
    if (tied.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
      best = tied[pick(rng_)];
    }
  }
  return ArmIndex(best);
}

RalcbPolicy::RalcbPolicy(std::size_t num_arms, PhiParams params, TieBreak ties, std::uint64_t seed)
    : Policy(num_arms, ties, seed), params_(params) {}

double RalcbPolicy::index(std::size_t arm, std::size_t t) const {
  const auto& m = state().arm(arm);
  return m.mean_variance(params_.rho) - phi(exploration_arg(t, m.count()), params_);
}

MvlcbPolicy::MvlcbPolicy(std::size_t num_arms, double rho_tilde, std::size_t horizon,
                         std::optional<double> delta, TieBreak ties, std::uint64_t seed)
    : Policy(num_arms, ties, seed), rho_tilde_(rho_tilde) {
  if (!(rho_tilde >= 0.0) || !std::isfinite(rho_tilde)) {
    throw std::invalid_argument("mvlcb needs a finite rho_tilde >= 0");
  }
  if (delta) {
    log_inv_delta_ = std::log(1.0 / *delta);
  } else {
    if (horizon < 1) throw std::invalid_argument("mvlcb needs the horizon n up front");
    log_inv_delta_ = 8.0 * std::log(static_cast<double>(horizon));
  }
}

double MvlcbPolicy::index(std::size_t arm, std::size_t /*t*/) const {
  const auto& m = state().arm(arm);
  const double mv = m.variance() - rho_tilde_ * m.mean();
  return mv - (5.0 + rho_tilde_) * std::sqrt(log_inv_delta_ / static_cast<double>(m.count()));
}

MvucbPolicy::MvucbPolicy(std::size_t num_arms, RiskTolerance rho, double b, TieBreak ties,
                         std::uint64_t seed)
    : Policy(num_arms, ties, seed), rho_(rho), b_(b) {
  if (!(b >= 0.0)) throw std::invalid_argument("mvucb b must be >= 0");
}

double MvucbPolicy::index(std::size_t arm, std::size_t t) const {
  const auto& m = state().arm(arm);
  return m.mean_variance(rho_) -
         b_ * std::sqrt(std::log(static_cast<double>(t)) / static_cast<double>(m.count()));
}

UcbPolicy::UcbPolicy(std::size_t num_arms, double theta, TieBreak ties, std::uint64_t seed)
    : Policy(num_arms, ties, seed), theta_(SubGaussianParam(theta).value()) {}

double UcbPolicy::index(std::size_t arm, std::size_t t) const {
  const auto& m = state().arm(arm);
  return -(m.mean() + theta_ * std::sqrt(exploration_arg(t, m.count())));
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(std::size_t num_arms, RiskTolerance rho, double epsilon,
                                         TieBreak ties, std::uint64_t seed)
    : Policy(num_arms, ties, seed), rho_(rho), epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
}

double EpsilonGreedyPolicy::index(std::size_t arm, std::size_t /*t*/) const {
  return state().arm(arm).mean_variance(rho_);
}

std::optional<ArmIndex> EpsilonGreedyPolicy::forced_choice(std::size_t /*t*/) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng()) < epsilon_) {
    std::uniform_int_distribution<std::size_t> pick(0, num_arms() - 1);
    return ArmIndex(pick(rng()));
  }
  return std::nullopt;
}

UniformPolicy::UniformPolicy(std::size_t num_arms, std::uint64_t seed)
    : Policy(num_arms, TieBreak::Deterministic, seed) {}

double UniformPolicy::index(std::size_t /*arm*/, std::size_t /*t*/) const { return 0.0; }

std::optional<ArmIndex> UniformPolicy::forced_choice(std::size_t t) {
  return ArmIndex((t - 1) % num_arms());
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t num_arms,
                                    const PolicyContext& ctx) {
  const auto rho = RiskTolerance::from_tilde(ctx.rho_tilde);
  const double theta = spec.theta.value_or(ctx.theta);
  switch (spec.kind) {
    case PolicyKind::Ralcb:
      return std::make_unique<RalcbPolicy>(num_arms, PhiParams{rho, SubGaussianParam(theta)},
                                           spec.ties, ctx.seed);
    case PolicyKind::Mvlcb:
      return std::make_unique<MvlcbPolicy>(num_arms, ctx.rho_tilde, ctx.horizon, spec.delta,
                                           spec.ties, ctx.seed);
    case PolicyKind::Mvucb:
      return std::make_unique<MvucbPolicy>(num_arms, rho, spec.b.value_or(5.0 + ctx.rho_tilde),
                                           spec.ties, ctx.seed);
    case PolicyKind::Ucb:
      return std::make_unique<UcbPolicy>(num_arms, theta, spec.ties, ctx.seed);
    case PolicyKind::EpsilonGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(num_arms, rho, spec.epsilon, spec.ties,
                                                   ctx.seed);
    case PolicyKind::Uniform:
      return std::make_unique<UniformPolicy>(num_arms, ctx.seed);
  }
  throw std::invalid_argument("unhandled policy kind");
}

void continue_episode(Policy& policy, BanditEnvironment& env, PullLog& log, std::size_t n) {
  if (env.num_arms() != policy.num_arms() || log.num_arms() != policy.num_arms()) {
    throw std::invalid_argument("policy, environment and log disagree on the number of arms");
  }
  std::vector<double> rewards(env.num_arms());
  while (log.size() < n) {
    const auto arm = policy.next_arm();
    env.sample_round(rewards);
    policy.observe(arm, rewards[arm.value]);
    log.append(arm, rewards[arm.value]);
  }
}

PullLog run_episode(Policy& policy, BanditEnvironment& env, std::size_t n) {
  if (n < policy.num_arms()) {
    throw std::invalid_argument("horizon n=" + std::to_string(n) + " is shorter than K=" +
                                std::to_string(policy.num_arms()));
  }
  PullLog log(policy.num_arms());
  continue_episode(policy, env, log, n);
  return log;
}

}  // namespace riskbandit
