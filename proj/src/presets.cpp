#include "riskbandit/presets.hpp"

namespace riskbandit {
namespace {

std::vector<ArmDistribution> gaussians(const std::vector<double>& mu,
                                       const std::vector<double>& sigma2) {
  std::vector<ArmDistribution> arms;
  for (std::size_t i = 0; i < mu.size(); ++i) arms.push_back(ArmDistribution::gaussian(mu[i], sigma2[i]));
  return arms;
}

std::vector<PolicySpec> policies(std::initializer_list<const char*> names) {
  std::vector<PolicySpec> out;
  for (const char* n : names) out.push_back(parse_policy_spec(n));
  return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"scenario-var-min", "scenario-balance",
                                              "scenario-reward-max", "rho-sweep",
                                              "k-sweep", "tau-sweep", "transform-demo"};
  return names;
}

std::vector<ArmDistribution> fifteen_arm_setup() {
  return gaussians({0.1, 0.2, 0.23, 0.27, 0.32, 0.32, 0.34, 0.41, 0.43, 0.54, 0.55, 0.56, 0.67,
                    0.71, 0.79},
                   {0.05, 0.34, 0.28, 0.09, 0.23, 0.72, 0.19, 0.14, 0.44, 0.53, 0.24, 0.36, 0.56,
                    0.49, 0.85});
}

std::vector<ArmDistribution> three_arm_example() {
  return gaussians({0.1, 0.41, 0.79}, {0.05, 0.44, 0.85});
}

ExperimentConfig preset_config(const std::string& name, bool paper_scale) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.runs = 100;
  cfg.horizon = 10000;
  cfg.output_dir = "out/" + name;
  std::size_t paper_horizon = 30000;

  if (name == "scenario-var-min" || name == "scenario-balance" || name == "scenario-reward-max") {
    cfg.environment.arms = fifteen_arm_setup();
    cfg.policies = policies({"ralcb", "mvlcb"});
    cfg.rho_tildes = {name == "scenario-var-min" ? 1e-3 : name == "scenario-balance" ? 1.0 : 1e3};
  } else if (name == "rho-sweep") {
    cfg.environment.arms = fifteen_arm_setup();
    cfg.policies = policies({"ralcb", "mvlcb"});
    cfg.rho_tildes = {0, 0.001, 0.01, 0.1, 0.3, 1, 3, 5, 7, 10, 20, 50, 100, 1000, 10000};
    cfg.keep_logs = 0;
    paper_horizon = 10000;
  } else if (name == "k-sweep") {
    cfg.environment.random = RandomArmsSpec{};
    cfg.environment.random->count = 20;
    cfg.environment.random->seed = 2024;
    cfg.policies = policies({"ralcb"});
    cfg.k_values = {5, 10, 15, 20};
    cfg.horizon = 5000;
    cfg.keep_logs = 0;
  } else if (name == "tau-sweep") {
    cfg.environment.arms = three_arm_example();
    cfg.policies = policies({"ralcb"});
    cfg.rho_tildes = {1e-3, 1, 1e3};
    cfg.tau_values = {-0.5, -0.2, 0, 0.2, 0.5, 1};
    cfg.keep_logs = 0;
  } else if (name == "transform-demo") {
    cfg.environment.arms = three_arm_example();
    cfg.environment.equicorrelation = 0.2;
    Eigen::MatrixXd w(3, 3);
    w << 0.5, 0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0.5;
    cfg.environment.combine_weights = w;
    cfg.environment.combine_mode = CombineMode::Compare;
    cfg.policies = policies({"ralcb"});
    cfg.rho_tildes = {1e-3, 1};
    cfg.horizon = 5000;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("preset", "unknown preset '" + name + "' (known: " + known + ")");
  }
  if (paper_scale) {
    cfg.runs = 1000;
    cfg.horizon = paper_horizon;
  }
  return cfg;
}

}  // namespace riskbandit
