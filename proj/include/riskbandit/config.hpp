#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "riskbandit/arms.hpp"
#include "riskbandit/policies.hpp"

namespace riskbandit {

/// Invalid configuration; what() is "<path>: <reason>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& reason)
      : std::runtime_error(path.empty() ? reason : path + ": " + reason), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arms drawn once from a fixed seed: mu ~ U[mu_lo, mu_hi], sigma2 ~ U[var_lo, var_hi].
struct RandomArmsSpec {
  std::size_t count = 20;
  std::uint64_t seed = 1;
  double mu_lo = 0.1;
  double mu_hi = 0.8;
  double var_lo = 0.05;
  double var_hi = 0.85;

  std::vector<ArmDistribution> draw() const;
};

/// How the common theta handed to the policies is chosen.
struct ThetaChoice {
  enum class Mode { MaxSigma, Half, Fixed };
  Mode mode = Mode::MaxSigma;
  double value = 0.0;  // Fixed only

  std::string to_string() const;
};

enum class CombineMode { None, Only, Compare };

struct EnvironmentSpec {
  std::vector<ArmDistribution> arms;
  std::optional<RandomArmsSpec> random;
  std::optional<Eigen::MatrixXd> correlation;
  std::optional<double> equicorrelation;
  std::optional<Eigen::MatrixXd> combine_weights;
  CombineMode combine_mode = CombineMode::None;

  /// Explicit arms, or the random draw.
  std::vector<ArmDistribution> resolve_arms() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvironmentSpec environment;
  std::vector<PolicySpec> policies;
  std::size_t horizon = 10000;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::vector<double> rho_tildes{1.0};
  std::vector<std::size_t> k_values;   // sweep over the first K arms
  std::vector<double> tau_values;      // equicorrelation sweep
  ThetaChoice theta;
  std::filesystem::path output_dir = "out";
  bool full_resolution = false;
  std::size_t max_points = 2000;
  std::size_t keep_logs = 1;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;
};

/// Strict YAML parsing: unknown keys and type mismatches are ConfigErrors.
ExperimentConfig parse_experiment_config(const std::string& yaml_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Largest K for which the K x K equicorrelation matrix with parameter tau
/// is PSD (tau >= -1/(K-1)); SIZE_MAX for tau >= 0.
std::size_t max_equicorrelated_arms(double tau);

}  // namespace riskbandit
