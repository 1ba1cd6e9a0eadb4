#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "riskbandit/backtest.hpp"
#include "riskbandit/confidence.hpp"
#include "riskbandit/experiment.hpp"
#include "riskbandit/output.hpp"
#include "riskbandit/policies.hpp"
#include "riskbandit/presets.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace riskbandit;

namespace {

PhiParams params(double rho, double theta) { return {RiskTolerance(rho), SubGaussianParam(theta)}; }

py::dict hp_dict(const HighProbBound& hp) {
  return py::dict("bound"_a = hp.bound, "confidence"_a = hp.confidence, "vacuous"_a = hp.vacuous);
}

BanditEnvironment gaussian_env(const std::vector<double>& mu, const std::vector<double>& sigma2,
                               std::optional<double> tau, std::uint64_t seed) {
  if (mu.size() != sigma2.size()) throw std::invalid_argument("mu and sigma2 differ in length");
  std::vector<ArmDistribution> arms;
  for (std::size_t i = 0; i < mu.size(); ++i) arms.push_back(ArmDistribution::gaussian(mu[i], sigma2[i]));
  std::optional<Eigen::MatrixXd> corr;
  if (tau) corr = equicorrelation(mu.size(), *tau);
  return BanditEnvironment(std::move(arms), corr, seed);
}

class PyPolicy {
 public:
  PyPolicy(const std::string& spec, std::size_t num_arms, double rho_tilde, double theta,
           std::size_t horizon, std::uint64_t seed)
      : policy_(make_policy(parse_policy_spec(spec), num_arms,
                            {rho_tilde, theta, horizon, seed})) {}

  std::size_t next_arm() { return policy_->next_arm().value; }
  void observe(std::size_t arm, double reward) { policy_->observe(ArmIndex(arm), reward); }
  void warm_start(std::size_t arm, double reward) { policy_->warm_start(ArmIndex(arm), reward); }
  std::vector<double> indices() const { return policy_->indices(); }
  std::vector<std::size_t> pull_counts() const { return policy_->state().pull_counts(); }
  std::size_t rounds() const { return policy_->state().rounds(); }
  std::string name() const { return policy_->name(); }

 private:
  std::unique_ptr<Policy> policy_;
};

py::dict episode(const std::string& spec, const std::vector<double>& mu,
                 const std::vector<double>& sigma2, std::size_t horizon, double rho_tilde,
                 std::optional<double> theta, std::optional<double> tau, std::uint64_t seed) {
  auto env = gaussian_env(mu, sigma2, tau, seed);
  double th = 0.0;
  for (double s : sigma2) th = std::max(th, std::sqrt(s));
  if (theta) th = *theta;
  auto policy = make_policy(parse_policy_spec(spec), mu.size(), {rho_tilde, th, horizon, seed + 1});
  const auto log = run_episode(*policy, env, horizon);
  std::vector<std::size_t> arms;
  std::vector<double> rewards;
  for (const auto& p : log.pulls()) {
    arms.push_back(p.arm.value);
    rewards.push_back(p.reward);
  }
  const TrueArmStats truth(mu, sigma2);
  return py::dict("arms"_a = arms, "rewards"_a = rewards,
                  "regret"_a = regret_trajectory(log, truth, RiskTolerance::from_tilde(rho_tilde)));
}

ExperimentResult run_with(ExperimentConfig cfg, std::optional<std::size_t> runs,
                          std::optional<std::size_t> horizon, std::optional<std::uint64_t> seed) {
  if (runs) cfg.runs = *runs;
  if (horizon) cfg.horizon = *horizon;
  if (seed) cfg.seed = *seed;
  cfg.validate();
  py::gil_scoped_release release;
  return run_experiment(cfg);
}

py::dict report_dict(const BacktestReport& r) {
  return py::dict("policy"_a = r.policy, "theta"_a = r.theta, "dates"_a = r.dates,
                  "wealth"_a = r.wealth, "returns"_a = r.returns, "selections"_a = r.selections,
                  "CW"_a = r.metrics.cw, "VO"_a = r.metrics.vo, "SR"_a = r.metrics.sr,
                  "MDD"_a = r.metrics.mdd);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Risk-aware multi-armed bandits: policies, bounds, simulation and backtests";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("rho_from_tilde", [](double rt) { return RiskTolerance::from_tilde(rt).value(); }, "rho_tilde"_a);
  m.def("phi", [](double x, double rho, double theta) { return phi(x, params(rho, theta)); },
        "x"_a, "rho"_a, "theta"_a);
  m.def("phi_inverse", [](double v, double rho, double theta) { return phi_inverse(v, params(rho, theta)); },
        "v"_a, "rho"_a, "theta"_a);
  m.def("mean_conc_bound", &mean_conc_bound, "n"_a, "delta"_a, "theta"_a);
  m.def("var_conc_bound", &var_conc_bound, "n"_a, "delta"_a, "theta"_a);
  m.def("mv_conc_bound",
        [](std::size_t n, double delta, double rho, double theta) {
          return mv_conc_bound(n, delta, params(rho, theta));
        },
        "n"_a, "delta"_a, "rho"_a, "theta"_a);

  m.def("mean_variance",
        [](const std::vector<double>& mu, const std::vector<double>& sigma2, double rho) {
          return TrueArmStats(mu, sigma2).mv(RiskTolerance(rho));
        },
        "mu"_a, "sigma2"_a, "rho"_a);
  m.def("optimal_arm",
        [](const std::vector<double>& mu, const std::vector<double>& sigma2, double rho) {
          return TrueArmStats(mu, sigma2).optimal_arm(RiskTolerance(rho)).value;
        },
        "mu"_a, "sigma2"_a, "rho"_a);
  m.def("expected_pull_bound",
        [](std::size_t n, std::size_t arm, const std::vector<double>& mu,
           const std::vector<double>& sigma2, double rho, double theta) {
          return expected_pull_bound(n, ArmIndex(arm), TrueArmStats(mu, sigma2), params(rho, theta));
        },
        "n"_a, "arm"_a, "mu"_a, "sigma2"_a, "rho"_a, "theta"_a);
  m.def("expected_regret_bound",
        [](std::size_t n, const std::vector<double>& mu, const std::vector<double>& sigma2,
           double rho, double theta) {
          return expected_regret_bound(n, TrueArmStats(mu, sigma2), params(rho, theta));
        },
        "n"_a, "mu"_a, "sigma2"_a, "rho"_a, "theta"_a);
  m.def("high_prob_regret_bound",
        [](std::size_t n, const std::vector<double>& mu, const std::vector<double>& sigma2,
           double rho, double theta) {
          return hp_dict(high_prob_regret_bound(n, TrueArmStats(mu, sigma2), params(rho, theta)));
        },
        "n"_a, "mu"_a, "sigma2"_a, "rho"_a, "theta"_a);

  m.def("empirical_mv",
        [](const std::vector<double>& rewards, double rho) {
          return empirical_mv_policy(rewards, RiskTolerance(rho));
        },
        "rewards"_a, "rho"_a);
  m.def("regret",
        [](const std::vector<std::size_t>& arms, const std::vector<double>& rewards,
           const std::vector<double>& mu, const std::vector<double>& sigma2, double rho) {
          if (arms.size() != rewards.size()) throw std::invalid_argument("arms and rewards differ in length");
          PullLog log(mu.size());
          for (std::size_t i = 0; i < arms.size(); ++i) log.append(ArmIndex(arms[i]), rewards[i]);
          return regret(log, TrueArmStats(mu, sigma2), RiskTolerance(rho));
        },
        "arms"_a, "rewards"_a, "mu"_a, "sigma2"_a, "rho"_a);

  py::class_<PyPolicy>(m, "Policy")
      .def(py::init<const std::string&, std::size_t, double, double, std::size_t, std::uint64_t>(),
           "spec"_a, "num_arms"_a, "rho_tilde"_a = 1.0, "theta"_a = 1.0, "horizon"_a = 0,
           "seed"_a = 0)
      .def("next_arm", &PyPolicy::next_arm)
      .def("observe", &PyPolicy::observe, "arm"_a, "reward"_a)
      .def("warm_start", &PyPolicy::warm_start, "arm"_a, "reward"_a)
      .def("indices", &PyPolicy::indices)
      .def_property_readonly("pull_counts", &PyPolicy::pull_counts)
      .def_property_readonly("rounds", &PyPolicy::rounds)
      .def_property_readonly("name", &PyPolicy::name);

  m.def("run_episode", &episode, "policy"_a, "mu"_a, "sigma2"_a, "horizon"_a, "rho_tilde"_a = 1.0,
        "theta"_a = py::none(), "tau"_a = py::none(), "seed"_a = 0);

  py::class_<CellResult>(m, "CellResult")
      .def_readonly("policy", &CellResult::policy)
      .def_readonly("scenario", &CellResult::scenario)
      .def_readonly("mean_regret", &CellResult::mean_regret)
      .def_readonly("std_regret", &CellResult::std_regret)
      .def_readonly("final_regret", &CellResult::final_regret)
      .def_readonly("mean_pulls", &CellResult::mean_pulls)
      .def_readonly("optimal_fraction", &CellResult::optimal_fraction)
      .def_property_readonly("final_mean", &CellResult::final_mean)
      .def_property_readonly("final_se", &CellResult::final_se)
      .def("cum_regret", &CellResult::cum_regret, "t"_a);

  py::class_<ScenarioSummary>(m, "Scenario")
      .def_readonly("label", &ScenarioSummary::label)
      .def_readonly("rho_tilde", &ScenarioSummary::rho_tilde)
      .def_readonly("k", &ScenarioSummary::k)
      .def_readonly("tau", &ScenarioSummary::tau)
      .def_readonly("combined", &ScenarioSummary::combined)
      .def_readonly("theta", &ScenarioSummary::theta)
      .def_readonly("mu", &ScenarioSummary::mu)
      .def_readonly("sigma2", &ScenarioSummary::sigma2)
      .def_readonly("optimal_arms", &ScenarioSummary::optimal_arms);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("name", &ExperimentResult::name)
      .def_readonly("horizon", &ExperimentResult::horizon)
      .def_readonly("runs", &ExperimentResult::runs)
      .def_readonly("scenarios", &ExperimentResult::scenarios)
      .def_readonly("cells", &ExperimentResult::cells)
      .def("write_csv", [](const ExperimentResult& r, const std::filesystem::path& dir,
                           bool full) { emit_csv(r, dir, {2000, full}); },
           "dir"_a, "full_resolution"_a = false)
      .def("write_plots", &emit_plots, "dir"_a);

  m.def("preset_names", &preset_names);
  m.def("run_preset",
        [](const std::string& name, std::optional<std::size_t> runs,
           std::optional<std::size_t> horizon, std::optional<std::uint64_t> seed, bool paper_scale) {
          return run_with(preset_config(name, paper_scale), runs, horizon, seed);
        },
        "name"_a, "runs"_a = py::none(), "horizon"_a = py::none(), "seed"_a = py::none(),
        "paper_scale"_a = false);
  m.def("run_config",
        [](const std::string& yaml, std::optional<std::size_t> runs,
           std::optional<std::size_t> horizon, std::optional<std::uint64_t> seed) {
          return run_with(parse_experiment_config(yaml), runs, horizon, seed);
        },
        "yaml"_a, "runs"_a = py::none(), "horizon"_a = py::none(), "seed"_a = py::none());

  m.def("max_drawdown", &max_drawdown, "wealth"_a);
  m.def("backtest",
        [](const std::filesystem::path& prices, const std::vector<std::string>& policies,
           double rho_tilde, const std::string& frequency, std::size_t warmup,
           std::optional<double> theta, double rf, std::uint64_t seed, bool equal_weight) {
          const auto data = ingest_prices(prices);
          BacktestOptions opt;
          opt.frequency = parse_frequency(frequency);
          opt.warmup = warmup;
          opt.theta = theta;
          opt.rf_annual = rf;
          opt.seed = seed;
          py::list out;
          for (const auto& p : policies) {
            out.append(report_dict(run_backtest(data.series, parse_policy_spec(p), rho_tilde, opt)));
          }
          if (equal_weight) out.append(report_dict(run_equal_weight(data.series, opt)));
          return out;
        },
        "prices"_a, "policies"_a = std::vector<std::string>{"ralcb", "ucb", "egreedy"},
        "rho_tilde"_a = 1.0, "frequency"_a = "weekly", "warmup"_a = 52, "theta"_a = py::none(),
        "rf"_a = 0.0438, "seed"_a = 1, "equal_weight"_a = true);
}
