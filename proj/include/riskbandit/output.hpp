#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riskbandit/experiment.hpp"

namespace riskbandit {

struct CsvOptions {
  std::size_t max_points = 2000;
  bool full_resolution = false;
};

/// Writes trajectory.csv, pulls.csv, bounds.csv and summary.csv into dir
/// (created if needed). Numbers use the shortest round-trip representation.
/// Throws IoError when a file cannot be written.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& dir,
              const CsvOptions& options = {});

struct TrajectoryRow {
  std::string policy;
  std::string scenario;
  std::size_t t = 0;
  double mean_regret = 0.0;
  double cum_regret = 0.0;
  double std_regret = 0.0;
};

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

/// Renders SVG figures plus a CSV sidecar holding exactly the plotted data:
/// pull rasters, cumulative and mean regret curves, and (when the result
/// spans a sweep) regret against rho_tilde, K and tau. Returns the written
/// file paths. Throws std::invalid_argument for a result with no runs.
std::vector<std::filesystem::path> emit_plots(const ExperimentResult& result,
                                              const std::filesystem::path& dir);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace riskbandit
