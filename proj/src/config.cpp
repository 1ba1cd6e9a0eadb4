#include "riskbandit/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "yaml_util.hpp"

namespace riskbandit {

std::vector<ArmDistribution> RandomArmsSpec::draw() const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mu(mu_lo, mu_hi);
  std::uniform_real_distribution<double> var(var_lo, var_hi);
  std::vector<ArmDistribution> arms;
  arms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double m = mu(rng);
    const double v = var(rng);
    arms.push_back(GaussianArm{m, v});
  }
  return arms;
}

std::string ThetaChoice::to_string() const {
  switch (mode) {
    case Mode::MaxSigma: return "max-sigma";
    case Mode::Half: return "half";
    case Mode::Fixed: {
      std::ostringstream os;
      os.precision(17);
      os << value;
      return os.str();
    }
  }
  return "?";
}

std::vector<ArmDistribution> EnvironmentSpec::resolve_arms() const {
  if (random) return random->draw();
  return arms;
}

std::size_t max_equicorrelated_arms(double tau) {
  if (tau >= 0.0) return std::numeric_limits<std::size_t>::max();
  // tau >= -1/(K-1)  <=>  K <= 1 - 1/tau
  return static_cast<std::size_t>(std::floor(1.0 - 1.0 / tau + 1e-12));
}

void ExperimentConfig::validate() const {
  if (policies.empty()) throw ConfigError("policies", "at least one policy is required");
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  if (max_points < 2) throw ConfigError("output.max_points", "must be >= 2");
  if (rho_tildes.empty()) throw ConfigError("rho_tilde", "at least one value is required");
  for (std::size_t i = 0; i < rho_tildes.size(); ++i) {
    if (!(rho_tildes[i] >= 0.0) || !std::isfinite(rho_tildes[i])) {
      throw ConfigError(yaml::index_path("rho_tilde", i), "must be finite and >= 0");
    }
  }
  if (theta.mode == ThetaChoice::Mode::Fixed && !(theta.value > 0.0)) {
    throw ConfigError("theta", "must be > 0");
  }
  const auto& env = environment;
  if (env.random && !env.arms.empty()) {
    throw ConfigError("environment", "give either 'arms' or 'random', not both");
  }
  if (env.correlation && env.equicorrelation) {
    throw ConfigError("environment", "give either 'correlation' or 'equicorrelation', not both");
  }
  const auto arms = env.resolve_arms();
  if (arms.empty()) throw ConfigError("environment.arms", "at least one arm is required");
  const auto k_total = arms.size();

  std::vector<std::size_t> ks = k_values.empty() ? std::vector<std::size_t>{k_total} : k_values;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto path = yaml::index_path("sweep.k", i);
    if (ks[i] < 1) throw ConfigError(path, "K must be >= 1");
    if (ks[i] > k_total) {
      throw ConfigError(path, "K=" + std::to_string(ks[i]) + " exceeds the " +
                                  std::to_string(k_total) + " configured arms");
    }
    if (horizon < ks[i]) {
      throw ConfigError("horizon", "n=" + std::to_string(horizon) + " is shorter than K=" +
                                       std::to_string(ks[i]));
    }
  }
  if ((env.correlation || env.equicorrelation || !tau_values.empty())) {
    for (std::size_t i = 0; i < arms.size(); ++i) {
      if (!arms[i].is_gaussian()) {
        throw ConfigError(yaml::index_path("environment.arms", i),
                          "correlated environments require Gaussian arms");
      }
    }
  }
  if (env.correlation && !k_values.empty()) {
    throw ConfigError("sweep.k", "a K sweep cannot be combined with an explicit correlation matrix");
  }
  if (env.correlation && !tau_values.empty()) {
    throw ConfigError("sweep.tau", "a tau sweep replaces the correlation matrix; remove one");
  }
  auto check_tau = [&](double tau, const std::string& path) {
    if (!(tau >= -1.0 && tau <= 1.0)) throw ConfigError(path, "tau must lie in [-1, 1]");
    for (auto k : ks) {
      if (k > 1 && tau < -1.0 / static_cast<double>(k - 1) - 1e-12) {
        std::ostringstream os;
        os << "equicorrelation tau=" << tau << " is not positive semi-definite for K=" << k
           << " (needs tau >= -1/(K-1) = " << -1.0 / static_cast<double>(k - 1)
           << "); at most K=" << max_equicorrelated_arms(tau) << " arms are feasible";
        throw ConfigError(path, os.str());
      }
    }
  };
  if (env.equicorrelation) check_tau(*env.equicorrelation, "environment.equicorrelation");
  for (std::size_t i = 0; i < tau_values.size(); ++i) {
    check_tau(tau_values[i], yaml::index_path("sweep.tau", i));
  }
  if (env.combine_weights) {
    if (!k_values.empty()) {
      throw ConfigError("environment.combine", "a combination cannot be used with a K sweep");
    }
    if (static_cast<std::size_t>(env.combine_weights->cols()) != k_total) {
      throw ConfigError("environment.combine.weights",
                        "needs " + std::to_string(k_total) + " columns");
    }
    if (horizon < static_cast<std::size_t>(env.combine_weights->rows())) {
      throw ConfigError("horizon", "shorter than the number of combined arms");
    }
  }
}

namespace {

ArmDistribution parse_arm(const YAML::Node& node, const std::string& path) {
  yaml::require_map(node, path);
  const auto kind = node["kind"] ? yaml::text(node["kind"], yaml::join(path, "kind"))
                                 : std::string("gaussian");
  auto num = [&](const char* key) {
    if (!node[key]) throw ConfigError(yaml::join(path, key), "missing");
    return yaml::number(node[key], yaml::join(path, key));
  };
  try {
    if (kind == "gaussian") {
      yaml::check_keys(node, path, {"kind", "mu", "sigma2"});
      return GaussianArm{num("mu"), num("sigma2")};
    }
    if (kind == "truncated_gaussian") {
      yaml::check_keys(node, path, {"kind", "mu", "sigma2", "lo", "hi"});
      return TruncatedGaussianArm{num("mu"), num("sigma2"), num("lo"), num("hi")};
    }
    if (kind == "bernoulli") {
      yaml::check_keys(node, path, {"kind", "lo", "hi", "p"});
      return ScaledBernoulliArm{num("lo"), num("hi"), num("p")};
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(yaml::join(path, "kind"),
                    "unknown arm kind '" + kind + "' (gaussian, truncated_gaussian, bernoulli)");
}

EnvironmentSpec parse_environment(const YAML::Node& node, const std::string& path) {
  yaml::check_keys(node, path,
                   {"arms", "mu", "sigma2", "random", "correlation", "equicorrelation", "combine"});
  EnvironmentSpec env;
  if (node["arms"]) {
    const auto p = yaml::join(path, "arms");
    yaml::require_sequence(node["arms"], p);
    for (std::size_t i = 0; i < node["arms"].size(); ++i) {
      env.arms.push_back(parse_arm(node["arms"][i], yaml::index_path(p, i)));
    }
  }
  if (node["mu"] || node["sigma2"]) {
    // Compact Gaussian form: parallel lists.
    if (!node["mu"] || !node["sigma2"]) {
      throw ConfigError(path, "'mu' and 'sigma2' must be given together");
    }
    if (!env.arms.empty()) throw ConfigError(path, "give either 'arms' or 'mu'/'sigma2'");
    const auto mu = yaml::numbers(node["mu"], yaml::join(path, "mu"));
    const auto s2 = yaml::numbers(node["sigma2"], yaml::join(path, "sigma2"));
    if (mu.size() != s2.size()) throw ConfigError(path, "'mu' and 'sigma2' differ in length");
    for (std::size_t i = 0; i < mu.size(); ++i) {
      try {
        env.arms.push_back(GaussianArm{mu[i], s2[i]});
      } catch (const std::invalid_argument& e) {
        throw ConfigError(yaml::index_path(yaml::join(path, "sigma2"), i), e.what());
      }
    }
  }
  if (const auto r = node["random"]) {
    const auto p = yaml::join(path, "random");
    yaml::check_keys(r, p, {"count", "seed", "mu", "sigma2"});
    RandomArmsSpec spec;
    if (r["count"]) spec.count = yaml::count(r["count"], yaml::join(p, "count"));
    if (r["seed"]) spec.seed = yaml::count(r["seed"], yaml::join(p, "seed"));
    auto range = [&](const char* key, double& lo, double& hi) {
      if (!r[key]) return;
      const auto v = yaml::numbers(r[key], yaml::join(p, key));
      if (v.size() != 2 || !(v[0] <= v[1])) {
        throw ConfigError(yaml::join(p, key), "expected [lo, hi] with lo <= hi");
      }
      lo = v[0];
      hi = v[1];
    };
    range("mu", spec.mu_lo, spec.mu_hi);
    range("sigma2", spec.var_lo, spec.var_hi);
    if (spec.var_lo < 0.0) throw ConfigError(yaml::join(p, "sigma2"), "variances must be >= 0");
    if (spec.count < 1) throw ConfigError(yaml::join(p, "count"), "must be >= 1");
    env.random = spec;
  }
  if (node["correlation"]) {
    env.correlation = yaml::matrix(node["correlation"], yaml::join(path, "correlation"));
  }
  if (node["equicorrelation"]) {
    env.equicorrelation = yaml::number(node["equicorrelation"], yaml::join(path, "equicorrelation"));
  }
  if (const auto c = node["combine"]) {
    const auto p = yaml::join(path, "combine");
    yaml::check_keys(c, p, {"weights", "mode"});
    if (!c["weights"]) throw ConfigError(yaml::join(p, "weights"), "missing");
    env.combine_weights = yaml::matrix(c["weights"], yaml::join(p, "weights"));
    env.combine_mode = CombineMode::Compare;
    if (c["mode"]) {
      const auto mode = yaml::text(c["mode"], yaml::join(p, "mode"));
      if (mode == "only") env.combine_mode = CombineMode::Only;
      else if (mode == "compare") env.combine_mode = CombineMode::Compare;
      else throw ConfigError(yaml::join(p, "mode"), "expected 'only' or 'compare'");
    }
    const auto& w = *env.combine_weights;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      double sum = 0.0;
      for (Eigen::Index col = 0; col < w.cols(); ++col) {
        if (!(w(r, col) >= 0.0)) {
          throw ConfigError(yaml::index_path(yaml::join(p, "weights"), static_cast<std::size_t>(r)),
                            "weights must be non-negative");
        }
        sum += w(r, col);
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw ConfigError(yaml::index_path(yaml::join(p, "weights"), static_cast<std::size_t>(r)),
                          "row does not sum to 1");
      }
    }
  }
  return env;
}

ThetaChoice parse_theta(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected 'max-sigma', 'half' or a number");
  const auto s = node.Scalar();
  if (s == "max-sigma") return {};
  if (s == "half") return {ThetaChoice::Mode::Half, 0.5};
  return {ThetaChoice::Mode::Fixed, yaml::number(node, path)};
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("YAML syntax error: ") + e.what());
  }
  yaml::check_keys(root, "",
                   {"name", "environment", "policies", "horizon", "runs", "seed", "rho_tilde",
                    "theta", "sweep", "output"});
  ExperimentConfig cfg;
  if (root["name"]) cfg.name = yaml::text(root["name"], "name");
  if (!root["environment"]) throw ConfigError("environment", "missing");
  cfg.environment = parse_environment(root["environment"], "environment");
  if (!root["policies"]) throw ConfigError("policies", "missing");
  {
    const auto node = root["policies"];
    yaml::require_sequence(node, "policies");
    for (std::size_t i = 0; i < node.size(); ++i) {
      const auto path = yaml::index_path("policies", i);
      try {
        cfg.policies.push_back(parse_policy_spec(yaml::text(node[i], path)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
      }
    }
  }
  if (root["horizon"]) cfg.horizon = yaml::count(root["horizon"], "horizon");
  if (root["runs"]) cfg.runs = yaml::count(root["runs"], "runs");
  if (root["seed"]) cfg.seed = yaml::scalar<std::uint64_t>(root["seed"], "seed", "an integer");
  if (root["rho_tilde"]) cfg.rho_tildes = yaml::numbers(root["rho_tilde"], "rho_tilde");
  if (root["theta"]) cfg.theta = parse_theta(root["theta"], "theta");
  if (const auto s = root["sweep"]) {
    yaml::check_keys(s, "sweep", {"k", "tau"});
    if (s["k"]) {
      yaml::require_sequence(s["k"], "sweep.k");
      for (std::size_t i = 0; i < s["k"].size(); ++i) {
        cfg.k_values.push_back(yaml::count(s["k"][i], yaml::index_path("sweep.k", i)));
      }
    }
    if (s["tau"]) cfg.tau_values = yaml::numbers(s["tau"], "sweep.tau");
  }
  if (const auto o = root["output"]) {
    yaml::check_keys(o, "output", {"dir", "full_resolution", "max_points", "keep_logs"});
    if (o["dir"]) cfg.output_dir = yaml::text(o["dir"], "output.dir");
    if (o["full_resolution"]) cfg.full_resolution = yaml::boolean(o["full_resolution"], "output.full_resolution");
    if (o["max_points"]) cfg.max_points = yaml::count(o["max_points"], "output.max_points");
    if (o["keep_logs"]) cfg.keep_logs = yaml::count(o["keep_logs"], "output.keep_logs");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace riskbandit
