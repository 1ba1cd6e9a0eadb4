#include "riskbandit/backtest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "riskbandit/config.hpp"
#include "riskbandit/output.hpp"
#include "riskbandit/seeding.hpp"
#include "yaml_util.hpp"

namespace riskbandit {

Frequency parse_frequency(const std::string& tag) {
  if (tag == "daily") return Frequency::Daily;
  if (tag == "weekly") return Frequency::Weekly;
  throw std::invalid_argument("frequency must be 'daily' or 'weekly', got '" + tag + "'");
}

double periods_per_year(Frequency f) { return f == Frequency::Daily ? 252.0 : 52.0; }

namespace {

bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  const int y = std::stoi(s.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(s.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(s.substr(8, 2)));
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}}
      .ok();
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

double sample_std(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

void check_series(const std::vector<PriceSeries>& series) {
  if (series.empty()) throw DataError("no price series");
  const auto& dates = series.front().dates;
  if (dates.size() < 2) throw DataError("need at least 2 dates");
  for (const auto& s : series) {
    if (s.dates != dates || s.prices.size() != dates.size()) {
      throw DataError("series '" + s.asset + "' is not aligned with '" + series.front().asset + "'");
    }
  }
}

}  // namespace

PriceData parse_prices(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "date,asset,price") {
    throw DataError("price file must start with the header 'date,asset,price'");
  }
  std::map<std::string, std::map<std::string, double>> by_asset;
  std::vector<std::string> order;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw DataError("line " + std::to_string(lineno) + ": expected 3 fields");
    }
    const auto date = trim(line.substr(0, c1));
    const auto asset = trim(line.substr(c1 + 1, c2 - c1 - 1));
    const auto ptext = trim(line.substr(c2 + 1));
    if (!valid_iso_date(date)) {
      throw DataError("line " + std::to_string(lineno) + ": unparseable date '" + date + "'");
    }
    if (asset.empty()) throw DataError("line " + std::to_string(lineno) + ": empty asset id");
    double price = 0.0;
    auto [ptr, ec] = std::from_chars(ptext.data(), ptext.data() + ptext.size(), price);
    if (ec != std::errc() || ptr != ptext.data() + ptext.size() || !std::isfinite(price)) {
      throw DataError("line " + std::to_string(lineno) + ": unparseable price '" + ptext + "'");
    }
    if (price <= 0.0) {
      throw DataError("line " + std::to_string(lineno) + ": non-positive price for " + asset);
    }
    if (!by_asset.count(asset)) order.push_back(asset);
    if (!by_asset[asset].emplace(date, price).second) {
      throw DataError("line " + std::to_string(lineno) + ": duplicate " + asset + " on " + date);
    }
  }

  PriceData out;
  std::vector<std::string> kept = order;
  // Rejecting an asset can shrink the calendar, so repeat until stable.
  for (;;) {
    std::set<std::string> calendar;
    for (const auto& a : kept) {
      for (const auto& [d, p] : by_asset[a]) calendar.insert(d);
    }
    std::vector<std::string> next;
    for (const auto& a : kept) {
      const auto& obs = by_asset[a];
      std::size_t run = 0, longest = 0, missing = 0;
      bool leading = false, seen = false;
      for (const auto& d : calendar) {
        if (obs.count(d)) {
          seen = true;
          run = 0;
        } else {
          ++missing;
          if (!seen) leading = true;
          longest = std::max(longest, ++run);
        }
      }
      if (leading || longest > 1) {
        std::ostringstream msg;
        msg << a << ": missing " << missing << " of " << calendar.size() << " dates";
        if (leading) msg << " including the first";
        out.rejected.push_back(msg.str());
      } else {
        next.push_back(a);
      }
    }
    if (next.size() == kept.size()) {
      std::vector<std::string> dates(calendar.begin(), calendar.end());
      for (const auto& a : kept) {
        PriceSeries s;
        s.asset = a;
        s.dates = dates;
        const auto& obs = by_asset[a];
        for (const auto& d : dates) {
          auto it = obs.find(d);
          if (it != obs.end()) {
            s.prices.push_back(it->second);
          } else {
            s.prices.push_back(s.prices.back());
            out.filled.push_back(a + "@" + d);
          }
        }
        out.series.push_back(std::move(s));
      }
      break;
    }
    kept = std::move(next);
  }
  if (out.series.empty()) throw DataError("no asset survived alignment");
  if (out.series.front().dates.size() < 2) throw DataError("fewer than 2 common dates");
  return out;
}

PriceData ingest_prices(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + csv_path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_prices(ss.str());
}

std::vector<std::vector<double>> period_returns(const std::vector<PriceSeries>& series) {
  check_series(series);
  const auto periods = series.front().dates.size() - 1;
  std::vector<std::vector<double>> r(periods, std::vector<double>(series.size()));
  for (std::size_t t = 0; t < periods; ++t) {
    for (std::size_t i = 0; i < series.size(); ++i) {
      r[t][i] = series[i].prices[t + 1] / series[i].prices[t] - 1.0;
    }
  }
  return r;
}

double max_drawdown(const std::vector<double>& wealth) {
  double peak = 0.0, mdd = 0.0;
  for (double w : wealth) {
    peak = std::max(peak, w);
    if (peak > 0.0) mdd = std::max(mdd, (peak - w) / peak);
  }
  return mdd;
}

Metrics compute_metrics(const std::vector<double>& wealth, const std::vector<double>& returns,
                        double rf_annual, double a) {
  Metrics m;
  m.cw = wealth.empty() ? 1.0 : wealth.back();
  const double sd = sample_std(returns);
  m.vo = sd * std::sqrt(a);
  if (sd > 0.0) {
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(returns.size());
    m.sr = (mean - rf_annual / a) / sd * std::sqrt(a);
  } else {
    m.sr = std::nan("");
  }
  m.mdd = max_drawdown(wealth);
  return m;
}

namespace {

void check_window(const std::vector<std::vector<double>>& r, const BacktestOptions& o) {
  if (o.warmup >= r.size()) {
    throw DataError("warm-up of " + std::to_string(o.warmup) + " periods leaves no period of " +
                    std::to_string(r.size()) + " to evaluate");
  }
}

BacktestReport finish_report(BacktestReport rep, const std::vector<PriceSeries>& series,
                             const BacktestOptions& o) {
  const auto& dates = series.front().dates;
  rep.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(o.warmup), dates.end());
  rep.wealth.assign(1, 1.0);
  for (double r : rep.returns) rep.wealth.push_back(rep.wealth.back() * (1.0 + r));
  rep.metrics = compute_metrics(rep.wealth, rep.returns, o.rf_annual, periods_per_year(o.frequency));
  return rep;
}

}  // namespace

BacktestReport run_backtest(const std::vector<PriceSeries>& series, const PolicySpec& spec,
                            double rho_tilde, const BacktestOptions& o) {
  const auto r = period_returns(series);
  check_window(r, o);
  const auto k = series.size();

  double theta = 0.0;
  if (o.theta) {
    theta = *o.theta;
  } else {
    if (o.warmup == 0) throw DataError("theta must be given when there is no warm-up");
    std::vector<double> pooled;
    for (std::size_t t = 0; t < o.warmup; ++t) pooled.insert(pooled.end(), r[t].begin(), r[t].end());
    double mean = 0.0;
    for (double v : pooled) mean += v;
    mean /= static_cast<double>(pooled.size());
    double ss = 0.0;
    for (double v : pooled) ss += (v - mean) * (v - mean);
    theta = 3.0 * std::sqrt(ss / static_cast<double>(pooled.size()));
    if (!(theta > 0.0)) throw DataError("warm-up returns have zero spread; set theta explicitly");
  }

  PolicyContext ctx{rho_tilde, theta, r.size(),
                    policy_seed(replication_seed(o.seed, spec.to_string(), "backtest", 0))};
  auto policy = make_policy(spec, k, ctx);
  for (std::size_t t = 0; t < o.warmup; ++t) {
    const ArmIndex arm(t % k);
    policy->warm_start(arm, r[t][arm.value]);
  }

  BacktestReport rep;
  rep.policy = spec.to_string();
  rep.theta = theta;
  for (std::size_t t = o.warmup; t < r.size(); ++t) {
    const auto arm = policy->next_arm();
    const double ret = r[t][arm.value];
    policy->observe(arm, ret);
    rep.selections.push_back(arm.value);
    rep.returns.push_back(ret);
  }
  return finish_report(std::move(rep), series, o);
}

BacktestReport run_equal_weight(const std::vector<PriceSeries>& series, const BacktestOptions& o) {
  const auto r = period_returns(series);
  check_window(r, o);
  BacktestReport rep;
  rep.policy = "ew";
  for (std::size_t t = o.warmup; t < r.size(); ++t) {
    double sum = 0.0;
    for (double v : r[t]) sum += v;
    rep.returns.push_back(sum / static_cast<double>(r[t].size()));
  }
  return finish_report(std::move(rep), series, o);
}

std::vector<double> replay_wealth(const std::vector<PriceSeries>& series,
                                  const std::vector<std::size_t>& selections, std::size_t warmup) {
  const auto r = period_returns(series);
  if (warmup + selections.size() > r.size()) throw DataError("selection log longer than the data");
  std::vector<double> wealth{1.0};
  for (std::size_t j = 0; j < selections.size(); ++j) {
    wealth.push_back(wealth.back() * (1.0 + r[warmup + j].at(selections[j])));
  }
  return wealth;
}

BacktestConfig parse_backtest_config(const std::string& yaml_text,
                                     const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("YAML syntax error: ") + e.what());
  }
  yaml::check_keys(root, "",
                   {"prices", "frequency", "policies", "rho_tilde", "rf", "warmup", "theta",
                    "seed", "equal_weight", "output"});
  BacktestConfig cfg;
  if (!root["prices"]) throw ConfigError("prices", "missing");
  cfg.prices = yaml::text(root["prices"], "prices");
  if (cfg.prices.is_relative() && !base_dir.empty()) cfg.prices = base_dir / cfg.prices;
  if (!root["frequency"]) throw ConfigError("frequency", "missing (daily or weekly)");
  try {
    cfg.options.frequency = parse_frequency(yaml::text(root["frequency"], "frequency"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("frequency", e.what());
  }
  if (root["policies"]) {
    yaml::require_sequence(root["policies"], "policies");
    for (std::size_t i = 0; i < root["policies"].size(); ++i) {
      const auto path = yaml::index_path("policies", i);
      try {
        cfg.policies.push_back(parse_policy_spec(yaml::text(root["policies"][i], path)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
      }
    }
  } else {
    cfg.policies = {parse_policy_spec("ralcb"), parse_policy_spec("ucb"),
                    parse_policy_spec("egreedy")};
  }
  if (root["rho_tilde"]) {
    cfg.rho_tilde = yaml::number(root["rho_tilde"], "rho_tilde");
    if (!(cfg.rho_tilde >= 0.0)) throw ConfigError("rho_tilde", "must be >= 0");
  }
  if (root["rf"]) cfg.options.rf_annual = yaml::number(root["rf"], "rf");
  if (root["warmup"]) cfg.options.warmup = yaml::count(root["warmup"], "warmup");
  if (root["theta"]) {
    cfg.options.theta = yaml::number(root["theta"], "theta");
    if (!(*cfg.options.theta > 0.0 && std::isfinite(*cfg.options.theta))) {
      throw ConfigError("theta", "must be finite and > 0");
    }
  }
  if (root["seed"]) cfg.options.seed = yaml::scalar<std::uint64_t>(root["seed"], "seed", "an integer");
  if (root["equal_weight"]) cfg.equal_weight = yaml::boolean(root["equal_weight"], "equal_weight");
  if (root["output"]) cfg.output_dir = yaml::text(root["output"], "output");
  return cfg;
}

BacktestConfig load_backtest_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_backtest_config(ss.str(), path.parent_path());
}

void emit_backtest_csv(const std::vector<BacktestReport>& reports,
                       const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  {
    const auto path = dir / "backtest_report.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "policy,CW,VO,SR,MDD\n";
    for (const auto& r : reports) {
      out << r.policy << ',' << format_double(r.metrics.cw) << ',' << format_double(r.metrics.vo)
          << ',' << format_double(r.metrics.sr) << ',' << format_double(r.metrics.mdd) << '\n';
    }
    if (!out.flush()) throw IoError("error while writing " + path.string());
  }
  const auto path = dir / "wealth.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "date,policy,wealth\n";
  for (const auto& r : reports) {
    for (std::size_t t = 0; t < r.wealth.size(); ++t) {
      out << r.dates[t] << ',' << r.policy << ',' << format_double(r.wealth[t]) << '\n';
    }
  }
  if (!out.flush()) throw IoError("error while writing " + path.string());
}

}  // namespace riskbandit
