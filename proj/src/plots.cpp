#include <algorithm>
#include <map>
#include <stdexcept>

#include "riskbandit/output.hpp"
#include "svg_chart.hpp"

namespace riskbandit {
namespace {

std::string sweep_key(const ScenarioSummary& s, bool rho, bool k, bool tau) {
  std::string key;
  auto add = [&](const std::string& part) { key += (key.empty() ? "" : ";") + part; };
  if (rho) add("rt=" + format_double(s.rho_tilde));
  if (k) add("K=" + std::to_string(s.k));
  if (tau && s.tau) add("tau=" + format_double(*s.tau));
  if (s.combined) add("combined");
  return key;
}

template <class Value>
std::vector<Value> distinct(const std::vector<ScenarioSummary>& scenarios,
                            Value (*get)(const ScenarioSummary&)) {
  std::vector<Value> out;
  for (const auto& s : scenarios) {
    const auto v = get(s);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

double rho_of(const ScenarioSummary& s) { return s.rho_tilde; }
double k_of(const ScenarioSummary& s) { return static_cast<double>(s.k); }
double tau_of(const ScenarioSummary& s) { return s.tau.value_or(0.0); }

enum class Axis { Rho, K, Tau };

svg::Chart sweep_chart(const ExperimentResult& result, Axis axis) {
  std::vector<double> xs;
  double (*get)(const ScenarioSummary&) =
      axis == Axis::Rho ? rho_of : axis == Axis::K ? k_of : tau_of;
  xs = distinct(result.scenarios, get);

  svg::Chart chart;
  for (double x : xs) chart.x_categories.push_back(format_double(x));
  const double n = static_cast<double>(result.horizon);

  std::map<std::string, std::size_t> index;
  auto series_for = [&](const std::string& name, bool dashed) -> svg::Series& {
    auto it = index.find(name);
    if (it == index.end()) {
      it = index.emplace(name, chart.series.size()).first;
      chart.series.push_back({name, {}, {}, dashed, true});
    }
    return chart.series[it->second];
  };

  for (const auto& cell : result.cells) {
    const auto& s = result.scenarios[cell.scenario];
    const auto rest = sweep_key(s, axis != Axis::Rho, axis != Axis::K, axis != Axis::Tau);
    const auto name = rest.empty() ? cell.policy : cell.policy + " " + rest;
    const double x = static_cast<double>(
        std::find(xs.begin(), xs.end(), get(s)) - xs.begin());
    auto& series = series_for(name, false);
    series.x.push_back(x);
    series.y.push_back(axis == Axis::K ? cell.final_mean() : cell.cum_regret(result.horizon));
  }
  if (axis == Axis::K) {
    for (const auto& s : result.scenarios) {
      if (s.bounds.empty() || s.bounds.back().t != result.horizon) continue;
      const auto rest = sweep_key(s, true, false, true);
      auto& series = series_for(rest.empty() ? "bound" : "bound " + rest, true);
      series.x.push_back(static_cast<double>(
          std::find(xs.begin(), xs.end(), get(s)) - xs.begin()));
      series.y.push_back(s.bounds.back().expected_regret_bound);
    }
    chart.title = "Average regret at n=" + format_double(n) + " vs number of arms";
    chart.x_label = "K";
    chart.y_label = "average regret";
    chart.log_y = true;
  } else if (axis == Axis::Rho) {
    chart.title = "Cumulative regret at n=" + format_double(n) + " vs rho_tilde";
    chart.x_label = "rho_tilde";
    chart.y_label = "cumulative regret";
  } else {
    chart.title = "Cumulative regret at n=" + format_double(n) + " vs tau";
    chart.x_label = "tau";
    chart.y_label = "cumulative regret";
  }
  return chart;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const ExperimentResult& result,
                                              const std::filesystem::path& dir) {
  if (result.runs == 0 ||
      std::any_of(result.cells.begin(), result.cells.end(),
                  [](const CellResult& c) { return c.final_regret.empty(); })) {
    throw std::invalid_argument("cannot plot a result with zero runs");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto rounds = thinned_rounds(result.horizon, 2000, false);

  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    const auto& cell = result.cells[c];
    if (cell.logs.empty()) continue;
    const auto& log = cell.logs.front();
    svg::Chart chart;
    chart.title = "Pulls, " + cell.policy + " " + result.scenarios[cell.scenario].label + " run 1";
    chart.x_label = "t";
    chart.y_label = "arm";
    chart.rows = log.num_arms();
    const auto& pulls = log.pulls();
    for (std::size_t i = 0; i < pulls.size();) {
      std::size_t j = i;
      while (j + 1 < pulls.size() && pulls[j + 1].arm == pulls[i].arm) ++j;
      chart.segments.push_back({static_cast<double>(pulls[i].round),
                                static_cast<double>(pulls[j].round),
                                static_cast<double>(pulls[i].arm.value)});
      i = j + 1;
    }
    svg::write(chart, dir / ("raster_" + std::to_string(c + 1) + ".svg"), written);
  }

  for (std::size_t s = 0; s < result.scenarios.size(); ++s) {
    svg::Chart cum, mean;
    const auto& label = result.scenarios[s].label;
    cum.title = "Cumulative regret, " + label;
    mean.title = "Mean regret, " + label;
    cum.x_label = mean.x_label = "t";
    cum.y_label = "cumulative regret";
    mean.y_label = "mean regret";
    for (const auto& cell : result.cells) {
      if (cell.scenario != s) continue;
      svg::Series a{cell.policy, {}, {}, false, false}, b = a;
      for (auto t : rounds) {
        a.x.push_back(static_cast<double>(t));
        a.y.push_back(cell.cum_regret(t));
        b.x.push_back(static_cast<double>(t));
        b.y.push_back(cell.mean_regret[t - 1]);
      }
      cum.series.push_back(std::move(a));
      mean.series.push_back(std::move(b));
    }
    if (cum.series.empty()) continue;
    const auto stem = "s" + std::to_string(s + 1);
    svg::write(cum, dir / ("cumulative_regret_" + stem + ".svg"), written);
    svg::write(mean, dir / ("mean_regret_" + stem + ".svg"), written);
  }

  if (!result.cells.empty()) {
    if (distinct(result.scenarios, rho_of).size() > 1) {
      svg::write(sweep_chart(result, Axis::Rho), dir / "regret_vs_rho.svg", written);
    }
    if (distinct(result.scenarios, k_of).size() > 1) {
      svg::write(sweep_chart(result, Axis::K), dir / "regret_vs_k.svg", written);
    }
    if (distinct(result.scenarios, tau_of).size() > 1) {
      svg::write(sweep_chart(result, Axis::Tau), dir / "regret_vs_tau.svg", written);
    }
  }
  return written;
}

}  // namespace riskbandit
