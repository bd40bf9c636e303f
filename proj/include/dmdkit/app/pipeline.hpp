#pragma once

#include "dmdkit/app/config.hpp"
#include "dmdkit/preprocess.hpp"

#include <optional>

namespace dmdkit::app {

/// A resolved run: the data on its way into the fit, every stage kept.
struct PreparedData {
  RunConfig config;  // all data-dependent defaults filled in
  std::vector<std::string> base_channels;
  TimeSeriesFrame raw;        // base channels, physical units, whole record
  TimeSeriesFrame augmented;  // base + derivative channels, physical units
  StandardizationParams params;
  TimeSeriesFrame standardized;
  TimeSeriesFrame train;
  TimeSeriesFrame test;
  double reference_period = 1.0;
};

/// Loads the CSV or generates the preset, then augments, standardizes and
/// splits. With `fixed` the given standardization is applied instead of
/// fitting a new one (forecasting from a saved model).
PreparedData prepare_data(const RunConfig& config, const std::optional<StandardizationParams>& fixed = std::nullopt);

/// Identity transform (mean 0, std 1) for the given channels.
StandardizationParams identity_standardization(const std::vector<std::string>& channels);

}  // namespace dmdkit::app
