#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "riskbandit/config.hpp"
#include "riskbandit/environment.hpp"
#include "riskbandit/stats.hpp"

namespace riskbandit {

/// One cell of the scenario grid: a concrete environment, risk level and theta.
struct Scenario {
  std::string label;
  double rho_tilde = 1.0;
  std::size_t k = 0;
  std::optional<double> tau;
  bool combined = false;
  double theta = 1.0;
  BanditEnvironment environment;  // template; reseeded per replication
  TrueArmStats truth;

  RiskTolerance rho() const { return RiskTolerance::from_tilde(rho_tilde); }
};

/// Expands rho_tilde x K x tau (x combination) into scenarios, in that
/// nesting order.
std::vector<Scenario> expand_scenarios(const ExperimentConfig& cfg);

struct BoundPoint {
  std::size_t t = 0;
  double expected_regret_bound = 0.0;
  double high_prob_bound = 0.0;
  double high_prob_confidence = 0.0;
};

/// Monte Carlo summary of one (policy, scenario) pair.
struct CellResult {
  std::string policy;    // PolicySpec::to_string()
  std::size_t scenario;  // index into ExperimentResult::scenarios
  /// Index t-1 holds the statistic of R_t over runs.
  std::vector<double> mean_regret;
  std::vector<double> std_regret;  // sample std over runs, 0 when runs == 1
  std::vector<double> final_regret;                 // R_n per run
  std::vector<std::vector<std::size_t>> pulls;      // T_{i,n} per run
  std::vector<double> mean_pulls;                   // mean T_{i,n} per arm
  std::vector<double> optimal_fraction;             // per run, share of pulls on optimal arms
  std::vector<PullLog> logs;                        // first keep_logs runs

  double cum_regret(std::size_t t) const { return static_cast<double>(t) * mean_regret[t - 1]; }
  double final_mean() const;
  double final_se() const;
  double mean_optimal_fraction() const;
};

struct ScenarioSummary {
  std::string label;
  double rho_tilde = 1.0;
  std::size_t k = 0;
  std::optional<double> tau;
  bool combined = false;
  double theta = 1.0;
  std::vector<double> mu;
  std::vector<double> sigma2;
  std::vector<std::size_t> optimal_arms;  // 0-based
  std::vector<BoundPoint> bounds;
};

struct ExperimentResult {
  std::string name;
  std::size_t horizon = 0;
  std::size_t runs = 0;
  std::vector<ScenarioSummary> scenarios;
  std::vector<CellResult> cells;

  const CellResult* find(const std::string& policy, const std::string& scenario_label) const;
};

/// Regret trajectory R_1..R_n of one pull log.
std::vector<double> regret_trajectory(const PullLog& log, const TrueArmStats& truth,
                                      RiskTolerance rho);

/// Evenly spaced 1-based rounds in [1, n], including both ends, at most
/// max_points of them (all rounds when full is set or n <= max_points).
std::vector<std::size_t> thinned_rounds(std::size_t n, std::size_t max_points, bool full);

/// Runs every (policy, scenario, run) replication. Deterministic for a
/// given config regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace riskbandit
