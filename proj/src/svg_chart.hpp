#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace riskbandit::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool markers = false;
};

struct Segment {
  double x0, x1, y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  // When set, x positions are 0..n-1 and these strings label the ticks.
  std::vector<std::string> x_categories;
  std::vector<Series> series;
  // Horizontal bars for raster plots; y is an integer row.
  std::vector<Segment> segments;
  std::size_t rows = 0;
};

std::string render(const Chart& chart);

/// Writes chart.svg and a sidecar chart.csv (series,x,y) with the plotted data.
void write(const Chart& chart, const std::filesystem::path& svg_path,
           std::vector<std::filesystem::path>& written);

}  // namespace riskbandit::svg
