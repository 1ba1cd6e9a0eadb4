#include "svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "riskbandit/config.hpp"
#include "riskbandit/output.hpp"

namespace riskbandit::svg {
namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 60;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string tick_text(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) {
      const double pad = std::max(std::abs(lo) * 0.05, 1e-9);
      lo -= pad;
      hi += pad;
    }
  }
};

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string render(const Chart& chart) {
  const bool categorical = !chart.x_categories.empty();
  Range xr, yr;
  for (const auto& s : chart.series) {
    for (double x : s.x) xr.add(x);
    for (double y : s.y) {
      if (!chart.log_y || y > 0) yr.add(chart.log_y ? std::log10(y) : y);
    }
  }
  for (const auto& seg : chart.segments) {
    xr.add(seg.x0);
    xr.add(seg.x1);
  }
  if (chart.rows > 0) {
    yr.lo = -0.5;
    yr.hi = static_cast<double>(chart.rows) - 0.5;
  }
  if (categorical) {
    xr.lo = -0.5;
    xr.hi = static_cast<double>(chart.x_categories.size()) - 0.5;
  }
  xr.settle();
  yr.settle();
  if (chart.rows == 0 && !chart.log_y) {
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;
  }
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * kPlotW; };
  auto py = [&](double y) { return kTop + kPlotH - (y - yr.lo) / (yr.hi - yr.lo) * kPlotH; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(kLeft + kPlotW / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(chart.title) << "</text>\n";
  o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(kPlotW)
    << "\" height=\"" << fmt(kPlotH) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks
  if (categorical) {
    for (std::size_t i = 0; i < chart.x_categories.size(); ++i) {
      const double x = px(static_cast<double>(i));
      o << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop + kPlotH) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(kTop + kPlotH + 4) << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + kPlotH + 16)
        << "\" text-anchor=\"middle\">" << escape(chart.x_categories[i]) << "</text>\n";
    }
  } else {
    for (double t : nice_ticks(xr.lo, xr.hi)) {
      const double x = px(t);
      o << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop + kPlotH) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(kTop + kPlotH + 4) << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + kPlotH + 16)
        << "\" text-anchor=\"middle\">" << tick_text(t) << "</text>\n";
    }
  }
  // y ticks
  if (chart.rows > 0) {
    for (std::size_t r = 0; r < chart.rows; ++r) {
      o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(static_cast<double>(r)) + 4)
        << "\" text-anchor=\"end\">" << r + 1 << "</text>\n";
    }
  } else if (chart.log_y) {
    for (double e = std::floor(yr.lo); e <= std::ceil(yr.hi); e += 1.0) {
      if (e < yr.lo - 1e-9 || e > yr.hi + 1e-9) continue;
      const double y = py(e);
      o << "<line x1=\"" << fmt(kLeft - 4) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">1e"
        << static_cast<int>(e) << "</text>\n";
    }
  } else {
    for (double t : nice_ticks(yr.lo, yr.hi)) {
      const double y = py(t);
      o << "<line x1=\"" << fmt(kLeft - 4) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
        << tick_text(t) << "</text>\n";
    }
  }
  o << "<text x=\"" << fmt(kLeft + kPlotW / 2) << "\" y=\"" << fmt(kHeight - 18)
    << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << fmt(kTop + kPlotH / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";

  for (const auto& seg : chart.segments) {
    const double x0 = px(seg.x0 - 0.5), x1 = px(seg.x1 + 0.5);
    const double h = std::max(1.0, 0.6 * kPlotH / static_cast<double>(std::max<std::size_t>(chart.rows, 1)));
    o << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(py(seg.y) - h / 2) << "\" width=\""
      << fmt(std::max(0.5, x1 - x0)) << "\" height=\"" << fmt(h) << "\" fill=\"#1f77b4\"/>\n";
  }

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::ostringstream pts;
    bool any = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (chart.log_y) {
        if (!(y > 0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(y)) continue;
      if (any) pts << ' ';
      pts << fmt(px(s.x[i])) << ',' << fmt(py(y));
      any = true;
      if (s.markers) {
        o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(y)) << "\" r=\"3\" fill=\""
          << colour << "\"/>\n";
      }
    }
    if (any) {
      o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
      if (s.dashed) o << " stroke-dasharray=\"6,4\"";
      o << " points=\"" << pts.str() << "\"/>\n";
    }
    const double ly = kTop + 10 + 16.0 * static_cast<double>(k);
    const double lx = kLeft + kPlotW + 12;
    o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 20)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"";
    if (s.dashed) o << " stroke-dasharray=\"4,3\"";
    o << "/>\n<text x=\"" << fmt(lx + 26) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write(const Chart& chart, const std::filesystem::path& svg_path,
           std::vector<std::filesystem::path>& written) {
  {
    std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + svg_path.string());
    out << render(chart);
    if (!out.flush()) throw IoError("error while writing " + svg_path.string());
  }
  written.push_back(svg_path);

  auto csv_path = svg_path;
  csv_path.replace_extension(".csv");
  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + csv_path.string());
  if (chart.rows > 0) {
    out << "t_start,t_end,arm\n";
    for (const auto& seg : chart.segments) {
      out << format_double(seg.x0) << ',' << format_double(seg.x1) << ',' << format_double(seg.y + 1)
          << '\n';
    }
  } else {
    out << "series,x,y\n";
    for (const auto& s : chart.series) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << s.name << ',';
        if (!chart.x_categories.empty()) {
          out << chart.x_categories[static_cast<std::size_t>(s.x[i])];
        } else {
          out << format_double(s.x[i]);
        }
        out << ',' << format_double(s.y[i]) << '\n';
      }
    }
  }
  if (!out.flush()) throw IoError("error while writing " + csv_path.string());
  written.push_back(csv_path);
}

}  // namespace riskbandit::svg
