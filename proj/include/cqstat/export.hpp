#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqstat/sweep.hpp"

namespace cqstat {

inline constexpr int kSchemaVersion = 1;

/// Column order of grid CSV files.
const std::vector<std::string>& grid_csv_columns();

/// One row of a grid CSV file; undefined values are empty cells.
struct GridCsvRow {
  std::optional<double> axis1, axis2, mean_n, g2, q;
  std::string classification;
  std::optional<double> s, p;
  std::optional<int> n_cut;
  std::optional<double> fidelity_qnbd;
  int n_max_used = 0;
  std::optional<double> residual;
  bool converged = false;
};

/// Doubles are written with 17 significant digits so that reading them back
/// is exact.
std::string grid_to_csv(const GridResult& result);
std::vector<GridCsvRow> grid_rows_from_csv(const std::string& text);

std::string grid_to_json(const GridResult& result);
/// g2 class heatmap and Q heatmap side by side with the mean-photon contours.
std::string grid_to_svg(const GridResult& result);

std::string validity_to_csv(const ValidityMap& map);
std::string validity_to_json(const ValidityMap& map);
std::string validity_to_svg(const ValidityMap& map);

std::string distribution_to_csv(const DistributionReport& report);
std::string distribution_to_json(const DistributionReport& report);

/// Fill colour used for a statistics class in heatmaps.
std::string_view class_color(StatisticsClass c);

/// Writes `<stem>.<ext>` for each requested format into `dir` (created if
/// needed) and returns the written paths. Throws std::runtime_error on I/O
/// failure.
std::vector<std::filesystem::path> export_grid(const GridResult& result,
                                               const std::filesystem::path& dir,
                                               const std::string& stem,
                                               const std::vector<OutputFormat>& formats);
std::vector<std::filesystem::path> export_validity(const ValidityMap& map,
                                                   const std::filesystem::path& dir,
                                                   const std::string& stem,
                                                   const std::vector<OutputFormat>& formats);
std::vector<std::filesystem::path> export_distribution(const DistributionReport& report,
                                                       const std::filesystem::path& dir,
                                                       const std::string& stem,
                                                       const std::vector<OutputFormat>& formats);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cqstat
