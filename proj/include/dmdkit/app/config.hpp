#pragma once

#include "dmdkit/time_series.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dmdkit::app {

/// Everything a run needs. Unset optionals are filled by resolve() from the
/// data source (preset defaults or the record length).
struct RunConfig {
  std::optional<std::string> input;   // CSV path
  std::optional<std::string> preset;  // synthetic preset name
  std::vector<std::string> columns;   // empty: all non-time columns / all preset channels
  std::optional<std::string> time_column;
  std::optional<double> dt;
  int derivative_order = 2;
  std::optional<Index> train_len;
  std::optional<Index> test_len;
  double rcond = 1e-12;
  std::string normalization = "variance";  // variance | unit
  std::optional<double> reference_period;  // seconds
  std::string output_dir = "dmdkit-out";
  std::optional<std::uint64_t> seed;
  std::optional<double> nonlinearity;  // preset override
  std::optional<double> noise;         // preset override
  std::string standardize = "full";    // full | train | none
  std::string nmse_channels = "base";  // base | all
};

/// Throws ValidationError on unknown keys or wrongly typed values.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& config);

/// Field-level checks that do not need the data (exactly one source, enums,
/// ranges).
void validate_config(const RunConfig& config);

}  // namespace dmdkit::app
