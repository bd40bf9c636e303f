#pragma once

#include "dmdkit/app/config.hpp"
#include "dmdkit/app/model_io.hpp"
#include "dmdkit/app/pipeline.hpp"
#include "dmdkit/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dmdkit::app {

struct FitOutcome {
  PreparedData data;
  ModelBundle bundle;
};

FitOutcome fit_run(const RunConfig& config);
void write_fit_artifacts(const std::filesystem::path& dir, const ModelBundle& bundle);

struct ForecastOutcome {
  TimeSeriesFrame prediction;  // standardized, every model channel
  TimeSeriesFrame truth;       // standardized
  ErrorReport report;          // over the channels selected by nmse_channels
  double max_imag = 0.0;
  nlohmann::json report_json;
};

/// Forecasts the test window of `data` from the model's training anchor.
/// With inject_truth the prediction is replaced by the truth (pipeline check).
ForecastOutcome forecast_run(const ModelBundle& bundle, const PreparedData& data, bool inject_truth);
void write_forecast_artifacts(const std::filesystem::path& dir, const ModelBundle& bundle, const PreparedData& data,
                              const ForecastOutcome& outcome);

/// Data preparation for an existing model: its derivative order, its
/// standardization and its training length override the config.
PreparedData prepare_for_model(const RunConfig& config, const ModelBundle& bundle);

// Commands return the process exit code; errors propagate as exceptions.
int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_forecast(const RunConfig& config, const std::filesystem::path& model_path, bool inject_truth,
                 std::ostream& out);
int cmd_evaluate(const RunConfig& config, bool inject_truth, std::ostream& out);
int cmd_synth(const RunConfig& config, const std::filesystem::path& output, std::ostream& out);

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">", ">="
  double threshold = 0.0;
  bool pass = false;
};

struct ScenarioResult {
  std::string name;
  std::vector<Check> checks;
  bool pass() const;
};

const std::vector<std::string>& selftest_scenarios();
/// Runs one scenario end to end, writing its artifacts (and checks.json) to dir.
ScenarioResult run_scenario(const std::string& name, const std::filesystem::path& dir, std::uint64_t seed);
int cmd_selftest(const std::vector<std::string>& names, const std::filesystem::path& out_dir, std::uint64_t seed,
                 std::ostream& out);

}  // namespace dmdkit::app
