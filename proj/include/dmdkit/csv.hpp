#pragma once

#include "dmdkit/time_series.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dmdkit {

// How to pick channels and the time grid out of a CSV file.
struct CsvSelection {
  std::vector<std::string> columns;        // empty: every column except the time column
  std::optional<std::string> time_column;  // sample instants, validated for uniformity
  std::optional<double> dt;                // overrides (and is checked against) the time column
  double t0 = 0.0;                         // used only without a time column
  double rel_tol = 1e-6;
};

TimeSeriesFrame load_csv(const std::filesystem::path& path, const CsvSelection& selection);
TimeSeriesFrame parse_csv(std::istream& in, const CsvSelection& selection);

/// Header "<time_column>,<channels...>", one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const TimeSeriesFrame& frame, const std::string& time_column = "t");
void write_csv(const std::filesystem::path& path, const TimeSeriesFrame& frame,
               const std::string& time_column = "t");

/// printf("%.17g"): round-trips every finite double.
std::string format_double(double value);

}  // namespace dmdkit
