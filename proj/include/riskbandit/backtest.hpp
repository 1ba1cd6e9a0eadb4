#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskbandit/policies.hpp"

namespace riskbandit {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Frequency { Daily, Weekly };

Frequency parse_frequency(const std::string& tag);
double periods_per_year(Frequency f);

struct PriceSeries {
  std::string asset;
  std::vector<std::string> dates;  // ISO-8601, strictly increasing
  std::vector<double> prices;
};

struct PriceData {
  std::vector<PriceSeries> series;    // aligned on a common calendar
  std::vector<std::string> rejected;  // one message per dropped asset
  std::vector<std::string> filled;    // "asset@date" for each forward-filled price
};

/// Reads a `date,asset,price` CSV. Single missing dates are forward-filled
/// from the previous observation; assets with longer or leading gaps are
/// dropped and reported in `rejected`.
PriceData ingest_prices(const std::filesystem::path& csv_path);
PriceData parse_prices(const std::string& csv_text);

struct BacktestOptions {
  Frequency frequency = Frequency::Weekly;
  double rf_annual = 0.0438;
  std::size_t warmup = 52;
  std::optional<double> theta;  // default: 3 x pooled std of warm-up returns
  std::uint64_t seed = 1;
};

struct Metrics {
  double cw = 1.0;
  double vo = 0.0;
  double sr = 0.0;  // NaN when the return std is zero
  double mdd = 0.0;
};

struct BacktestReport {
  std::string policy;
  double theta = 0.0;
  std::vector<std::string> dates;     // dates[0] is the start, wealth[0] == 1
  std::vector<double> wealth;
  std::vector<double> returns;        // realised portfolio return per period
  std::vector<std::size_t> selections;  // 0-based asset per period; empty for EW
  Metrics metrics;
};

/// Simple returns r[t][i] = p[i][t+1] / p[i][t] - 1.
std::vector<std::vector<double>> period_returns(const std::vector<PriceSeries>& series);

/// Standard metrics: CW final wealth, VO sample std x sqrt(A),
/// SR (mean - rf/A) / std x sqrt(A), MDD max peak-to-trough fall / peak.
Metrics compute_metrics(const std::vector<double>& wealth, const std::vector<double>& returns,
                        double rf_annual, double periods_per_year);
double max_drawdown(const std::vector<double>& wealth);

/// One asset per period chosen by the policy; the first `warmup` periods
/// rotate uniformly, feed the policy and are excluded from the metrics.
BacktestReport run_backtest(const std::vector<PriceSeries>& series, const PolicySpec& spec,
                            double rho_tilde, const BacktestOptions& options = {});

/// Equal weights across all assets each period, over the same metric window.
BacktestReport run_equal_weight(const std::vector<PriceSeries>& series,
                                const BacktestOptions& options = {});

/// Rebuilds the wealth path from a selection log.
std::vector<double> replay_wealth(const std::vector<PriceSeries>& series,
                                  const std::vector<std::size_t>& selections, std::size_t warmup);

struct BacktestConfig {
  std::filesystem::path prices;
  std::vector<PolicySpec> policies;
  double rho_tilde = 1.0;
  bool equal_weight = true;
  BacktestOptions options;
  std::filesystem::path output_dir = "out/backtest";
};

/// YAML keys: prices, frequency, policies, rho_tilde, rf, warmup, theta,
/// seed, equal_weight, output. Relative paths resolve against base_dir.
BacktestConfig parse_backtest_config(const std::string& yaml_text,
                                     const std::filesystem::path& base_dir = {});
BacktestConfig load_backtest_config(const std::filesystem::path& path);

/// Writes backtest_report.csv and wealth.csv.
void emit_backtest_csv(const std::vector<BacktestReport>& reports,
                       const std::filesystem::path& dir);

}  // namespace riskbandit
