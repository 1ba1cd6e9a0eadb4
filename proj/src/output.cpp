#include "riskbandit/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riskbandit {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void emit_csv(const ExperimentResult& result, const std::filesystem::path& dir,
              const CsvOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

  const auto rounds = thinned_rounds(result.horizon, options.max_points, options.full_resolution);
  {
    const auto path = dir / "trajectory.csv";
    auto out = open_for_write(path);
    out << "policy,scenario,t,mean_regret,cum_regret,std_regret\n";
    for (const auto& c : result.cells) {
      const auto& label = result.scenarios[c.scenario].label;
      for (auto t : rounds) {
        out << c.policy << ',' << label << ',' << t << ',' << format_double(c.mean_regret[t - 1])
            << ',' << format_double(c.cum_regret(t)) << ',' << format_double(c.std_regret[t - 1])
            << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "pulls.csv";
    auto out = open_for_write(path);
    out << "policy,scenario,arm,total_pulls_mean\n";
    for (const auto& c : result.cells) {
      const auto& label = result.scenarios[c.scenario].label;
      for (std::size_t i = 0; i < c.mean_pulls.size(); ++i) {
        out << c.policy << ',' << label << ',' << i + 1 << ',' << format_double(c.mean_pulls[i])
            << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "bounds.csv";
    auto out = open_for_write(path);
    out << "scenario,t,expected_regret_bound,high_prob_bound,high_prob_confidence\n";
    for (const auto& s : result.scenarios) {
      for (const auto& b : s.bounds) {
        out << s.label << ',' << b.t << ',' << format_double(b.expected_regret_bound) << ','
            << format_double(b.high_prob_bound) << ',' << format_double(b.high_prob_confidence)
            << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "summary.csv";
    auto out = open_for_write(path);
    out << "policy,scenario,rho_tilde,K,tau,combined,theta,final_mean_regret,final_se,"
           "cum_regret,optimal_pull_fraction\n";
    for (const auto& c : result.cells) {
      const auto& s = result.scenarios[c.scenario];
      out << c.policy << ',' << s.label << ',' << format_double(s.rho_tilde) << ',' << s.k << ','
          << (s.tau ? format_double(*s.tau) : std::string()) << ',' << (s.combined ? 1 : 0) << ','
          << format_double(s.theta) << ',' << format_double(c.final_mean()) << ','
          << format_double(c.final_se()) << ',' << format_double(c.cum_regret(result.horizon))
          << ',' << format_double(c.mean_optimal_fraction()) << '\n';
    }
    finish(out, path);
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "policy,scenario,t,mean_regret,cum_regret,std_regret") {
    throw std::invalid_argument(path.string() + ": unexpected trajectory header");
  }
  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw std::invalid_argument(path.string() + ": malformed row '" + line + "'");
    TrajectoryRow r;
    r.policy = f[0];
    r.scenario = f[1];
    r.t = static_cast<std::size_t>(std::stoull(f[2]));
    r.mean_regret = parse_double(f[3]);
    r.cum_regret = parse_double(f[4]);
    r.std_regret = parse_double(f[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace riskbandit
