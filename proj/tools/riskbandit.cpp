#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "riskbandit/backtest.hpp"
#include "riskbandit/confidence.hpp"
#include "riskbandit/config.hpp"
#include "riskbandit/experiment.hpp"
#include "riskbandit/output.hpp"
#include "riskbandit/presets.hpp"

using namespace riskbandit;

namespace {

struct Overrides {
  std::optional<std::size_t> runs;
  std::optional<std::size_t> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> policies;
  bool full_resolution = false;
  bool no_plots = false;

  void add_to(CLI::App* cmd, bool experiment) {
    if (experiment) {
      cmd->add_option("--runs", runs, "Monte Carlo replications");
      cmd->add_option("--horizon", horizon, "rounds per episode");
      cmd->add_flag("--full-resolution", full_resolution, "write every round to trajectory.csv");
      cmd->add_flag("--no-plots", no_plots, "skip SVG figures");
    }
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--policies", policies, "policy specs, e.g. ralcb mvlcb:delta=0.01");
  }

  std::vector<PolicySpec> parsed_policies() const {
    std::vector<PolicySpec> specs;
    for (std::size_t i = 0; i < policies.size(); ++i) {
      try {
        specs.push_back(parse_policy_spec(policies[i]));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("--policies[" + std::to_string(i) + "]", e.what());
      }
    }
    return specs;
  }

  void apply(ExperimentConfig& cfg) const {
    if (runs) cfg.runs = *runs;
    if (horizon) cfg.horizon = *horizon;
    if (seed) cfg.seed = *seed;
    if (out) cfg.output_dir = *out;
    if (!policies.empty()) cfg.policies = parsed_policies();
    if (full_resolution) cfg.full_resolution = true;
    cfg.validate();
  }
};

void run_and_write(const ExperimentConfig& cfg, bool plots) {
  std::cerr << cfg.name << ": " << cfg.policies.size() << " policies, " << cfg.runs
            << " runs, n=" << cfg.horizon << '\n';
  const auto result = run_experiment(cfg);
  emit_csv(result, cfg.output_dir, {cfg.max_points, cfg.full_resolution});
  if (plots && result.runs > 0) emit_plots(result, cfg.output_dir);
  for (const auto& c : result.cells) {
    std::printf("%-24s %-28s mean regret %.6f (se %.6f)  optimal-pull share %.4f\n",
                c.policy.c_str(), result.scenarios[c.scenario].label.c_str(), c.final_mean(),
                c.final_se(), c.mean_optimal_fraction());
  }
  std::cout << "wrote " << cfg.output_dir.string() << '\n';
}

void print_bounds(const ExperimentConfig& cfg) {
  for (const auto& sc : expand_scenarios(cfg)) {
    const auto rho = sc.rho();
    const PhiParams p{rho, SubGaussianParam(sc.theta)};
    const auto report = bound_report(cfg.horizon, sc.truth, p);
    std::printf("scenario %s  rho=%.6g  theta=%.6g  n=%zu\n", sc.label.c_str(), rho.value(),
                sc.theta, cfg.horizon);
    for (std::size_t i = 0; i < report.per_arm_pull_bound.size(); ++i) {
      const double b = report.per_arm_pull_bound[i];
      if (std::isnan(b)) {
        std::printf("  arm %2zu  optimal\n", i + 1);
      } else {
        std::printf("  arm %2zu  E[T_i,n] <= %.6g\n", i + 1, b);
      }
    }
    std::printf("  expected regret bound      %.6g\n", report.expected_regret_bound);
    std::printf("  high-probability bound     %.6g  (confidence %.6g%s)\n",
                report.high_prob.bound, report.high_prob.confidence,
                report.high_prob.vacuous ? ", vacuous" : "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-aware multi-armed bandit experiments"};
  app.require_subcommand(1);

  Overrides run_o, preset_o, bounds_o, bt_o;
  std::string run_path, preset_name, bounds_path, bt_path;
  bool paper_scale = false;
  std::optional<std::size_t> bounds_horizon;

  auto* run = app.add_subcommand("run", "run an experiment config (YAML)");
  run->add_option("config", run_path)->required();
  run_o.add_to(run, true);

  auto* preset = app.add_subcommand("preset", "run a named preset");
  preset->add_option("name", preset_name, "one of the preset names")->required();
  preset->add_flag("--paper-scale", paper_scale, "1000 runs at the published horizon");
  preset_o.add_to(preset, true);

  auto* bounds = app.add_subcommand("bounds", "print the regret bounds for a config");
  bounds->add_option("config", bounds_path)->required();
  bounds->add_option("--horizon", bounds_horizon, "n at which to evaluate");

  auto* backtest = app.add_subcommand("backtest", "single-asset backtest on price data");
  backtest->add_option("config", bt_path)->required();
  bt_o.add_to(backtest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*run) {
      auto cfg = load_experiment_config(run_path);
      run_o.apply(cfg);
      run_and_write(cfg, !run_o.no_plots);
    } else if (*preset) {
      auto cfg = preset_config(preset_name, paper_scale);
      preset_o.apply(cfg);
      run_and_write(cfg, !preset_o.no_plots);
    } else if (*bounds) {
      auto cfg = load_experiment_config(bounds_path);
      if (bounds_horizon) cfg.horizon = *bounds_horizon;
      cfg.validate();
      print_bounds(cfg);
    } else if (*backtest) {
      auto cfg = load_backtest_config(bt_path);
      if (bt_o.seed) cfg.options.seed = *bt_o.seed;
      if (bt_o.out) cfg.output_dir = *bt_o.out;
      if (!bt_o.policies.empty()) cfg.policies = bt_o.parsed_policies();
      const auto data = ingest_prices(cfg.prices);
      for (const auto& msg : data.rejected) std::cerr << "rejected " << msg << '\n';
      std::vector<BacktestReport> reports;
      for (const auto& spec : cfg.policies) {
        reports.push_back(run_backtest(data.series, spec, cfg.rho_tilde, cfg.options));
      }
      if (cfg.equal_weight) reports.push_back(run_equal_weight(data.series, cfg.options));
      emit_backtest_csv(reports, cfg.output_dir);
      std::printf("%-24s %12s %10s %10s %8s\n", "policy", "CW", "VO", "SR", "MDD");
      for (const auto& r : reports) {
        std::printf("%-24s %12.6f %10.6f %10.6f %8.4f\n", r.policy.c_str(), r.metrics.cw,
                    r.metrics.vo, r.metrics.sr, r.metrics.mdd);
      }
      std::cout << "wrote " << cfg.output_dir.string() << '\n';
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
