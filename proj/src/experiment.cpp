#include "riskbandit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "riskbandit/confidence.hpp"
#include "riskbandit/parallel.hpp"
#include "riskbandit/policies.hpp"
#include "riskbandit/seeding.hpp"

namespace riskbandit {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

TrueArmStats truth_of(const BanditEnvironment& env) {
  return TrueArmStats(env.true_means(), env.true_variances());
}

double choose_theta(const ThetaChoice& choice, const BanditEnvironment& env) {
  switch (choice.mode) {
    case ThetaChoice::Mode::MaxSigma: return env.common_theta();
    case ThetaChoice::Mode::Half: return 0.5;
    case ThetaChoice::Mode::Fixed: return choice.value;
  }
  return env.common_theta();
}

// Runs are processed in fixed-size batches and folded in run order, so the
// floating-point reduction does not depend on the worker count.
constexpr std::size_t kBatch = 64;

struct RunOutcome {
  std::vector<double> trajectory;
  std::vector<std::size_t> pulls;
  double optimal_fraction = 0.0;
  PullLog log{0};
};

}  // namespace

double CellResult::final_mean() const {
  return std::accumulate(final_regret.begin(), final_regret.end(), 0.0) /
         static_cast<double>(final_regret.size());
}

double CellResult::final_se() const {
  const auto m = final_regret.size();
  if (m < 2) return 0.0;
  const double mean = final_mean();
  double ss = 0.0;
  for (double x : final_regret) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(m - 1)) / std::sqrt(static_cast<double>(m));
}

double CellResult::mean_optimal_fraction() const {
  return std::accumulate(optimal_fraction.begin(), optimal_fraction.end(), 0.0) /
         static_cast<double>(optimal_fraction.size());
}

const CellResult* ExperimentResult::find(const std::string& policy,
                                         const std::string& scenario_label) const {
  for (const auto& c : cells) {
    if (c.policy == policy && scenarios[c.scenario].label == scenario_label) return &c;
  }
  return nullptr;
}

std::vector<Scenario> expand_scenarios(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto all_arms = cfg.environment.resolve_arms();
  const std::vector<std::size_t> ks =
      cfg.k_values.empty() ? std::vector<std::size_t>{all_arms.size()} : cfg.k_values;
  std::vector<std::optional<double>> taus;
  if (cfg.tau_values.empty()) {
    taus.emplace_back(cfg.environment.equicorrelation);
  } else {
    for (double t : cfg.tau_values) taus.emplace_back(t);
  }
  std::vector<bool> combined_flags;
  switch (cfg.environment.combine_mode) {
    case CombineMode::None: combined_flags = {false}; break;
    case CombineMode::Only: combined_flags = {true}; break;
    case CombineMode::Compare: combined_flags = {false, true}; break;
  }

  std::vector<Scenario> out;
  for (double rt : cfg.rho_tildes) {
    for (auto k : ks) {
      for (const auto& tau : taus) {
        std::vector<ArmDistribution> arms(all_arms.begin(),
                                          all_arms.begin() + static_cast<std::ptrdiff_t>(k));
        std::optional<Eigen::MatrixXd> corr = cfg.environment.correlation;
        if (tau) corr = equicorrelation(k, *tau);
        BanditEnvironment base(std::move(arms), corr, 0);
        for (bool comb : combined_flags) {
          std::string label = "rt=" + shortest(rt);
          if (!cfg.k_values.empty()) label += ";K=" + std::to_string(k);
          if (!cfg.tau_values.empty()) label += ";tau=" + shortest(*tau);
          if (cfg.environment.combine_mode == CombineMode::Compare) {
            label += comb ? ";combined" : ";base";
          }
          BanditEnvironment env = base;
          if (comb) {
            env = combine_arms(base, *cfg.environment.combine_weights, base.arm_thetas()).environment;
          }
          const double theta = choose_theta(cfg.theta, env);
          auto truth = truth_of(env);
          out.push_back(Scenario{std::move(label), rt, env.num_arms(), tau, comb, theta,
                                 std::move(env), std::move(truth)});
        }
      }
    }
  }
  return out;
}

std::vector<double> regret_trajectory(const PullLog& log, const TrueArmStats& truth,
                                      RiskTolerance rho) {
  RegretTracker tracker(rho, truth.min_mv(rho));
  std::vector<double> out;
  out.reserve(log.size());
  for (const auto& p : log.pulls()) out.push_back(tracker.push(p.reward));
  return out;
}

std::vector<std::size_t> thinned_rounds(std::size_t n, std::size_t max_points, bool full) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  if (full || n <= max_points || max_points < 2) {
    out.resize(n);
    std::iota(out.begin(), out.end(), std::size_t{1});
    return out;
  }
  const double step = static_cast<double>(n - 1) / static_cast<double>(max_points - 1);
  for (std::size_t j = 0; j < max_points; ++j) {
    const auto t = 1 + static_cast<std::size_t>(std::llround(static_cast<double>(j) * step));
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  out.back() = n;
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  auto scenarios = expand_scenarios(cfg);
  ExperimentResult result;
  result.name = cfg.name;
  result.horizon = cfg.horizon;
  result.runs = cfg.runs;
  const auto n = cfg.horizon;
  const auto workers = worker_count();
  const auto rounds = thinned_rounds(n, cfg.max_points, cfg.full_resolution);

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& sc = scenarios[s];
    const auto rho = sc.rho();
    const auto optimal = sc.truth.optimal_set(rho);

    ScenarioSummary summary;
    summary.label = sc.label;
    summary.rho_tilde = sc.rho_tilde;
    summary.k = sc.k;
    summary.tau = sc.tau;
    summary.combined = sc.combined;
    summary.theta = sc.theta;
    summary.mu = sc.truth.mu();
    summary.sigma2 = sc.truth.sigma2();
    for (auto a : optimal) summary.optimal_arms.push_back(a.value);
    const PhiParams params{rho, SubGaussianParam(sc.theta)};
    for (auto t : rounds) {
      if (t < std::max<std::size_t>(sc.k, 2)) continue;
      const auto hp = high_prob_regret_bound(t, sc.truth, params);
      summary.bounds.push_back(
          {t, expected_regret_bound(t, sc.truth, params), hp.bound, hp.confidence});
    }
    result.scenarios.push_back(std::move(summary));

    for (const auto& spec : cfg.policies) {
      CellResult cell;
      cell.policy = spec.to_string();
      cell.scenario = s;
      cell.mean_regret.assign(n, 0.0);
      std::vector<double> m2(n, 0.0);
      cell.mean_pulls.assign(sc.k, 0.0);

      std::size_t folded = 0;
      for (std::size_t start = 0; start < cfg.runs; start += kBatch) {
        const auto batch = std::min(kBatch, cfg.runs - start);
        std::vector<RunOutcome> outcomes(batch);
        parallel_for(batch, workers, [&](std::size_t j) {
          const auto run = start + j;
          const auto seed = replication_seed(cfg.seed, cell.policy, sc.label, run);
          auto env = sc.environment.reseeded(environment_seed(seed));
          PolicyContext ctx{sc.rho_tilde, sc.theta, n, policy_seed(seed)};
          auto policy = make_policy(spec, sc.k, ctx);
          auto log = run_episode(*policy, env, n);
          auto& out = outcomes[j];
          out.trajectory = regret_trajectory(log, sc.truth, rho);
          out.pulls = log.counts();
          std::size_t on_optimal = 0;
          for (auto a : optimal) on_optimal += out.pulls[a.value];
          out.optimal_fraction = static_cast<double>(on_optimal) / static_cast<double>(n);
          if (run < cfg.keep_logs) out.log = std::move(log);
        });
        for (auto& o : outcomes) {
          ++folded;
          const double w = static_cast<double>(folded);
          for (std::size_t t = 0; t < n; ++t) {
            const double d = o.trajectory[t] - cell.mean_regret[t];
            cell.mean_regret[t] += d / w;
            m2[t] += d * (o.trajectory[t] - cell.mean_regret[t]);
          }
          cell.final_regret.push_back(o.trajectory.back());
          for (std::size_t i = 0; i < sc.k; ++i) {
            cell.mean_pulls[i] += static_cast<double>(o.pulls[i]);
          }
          cell.pulls.push_back(std::move(o.pulls));
          cell.optimal_fraction.push_back(o.optimal_fraction);
          if (o.log.num_arms() > 0) cell.logs.push_back(std::move(o.log));
        }
      }
      for (auto& p : cell.mean_pulls) p /= static_cast<double>(cfg.runs);
      cell.std_regret.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        cell.std_regret[t] =
            cfg.runs > 1 ? std::sqrt(m2[t] / static_cast<double>(cfg.runs - 1)) : 0.0;
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace riskbandit
