#pragma once

#include "dmdkit/time_series.hpp"

#include <string>
#include <vector>

namespace dmdkit {

enum class Normalization { Variance, Unit };

Normalization parse_normalization(const std::string& text);
std::string to_string(Normalization normalization);

struct ErrorReport {
  std::vector<std::string> channels;
  Normalization normalization = Normalization::Variance;
  Eigen::VectorXd normalizer;   // per channel: truth variance over the window, or 1
  Eigen::VectorXd per_channel;  // NMSE over the whole window
  double average = 0.0;         // mean of per_channel
  Eigen::VectorXd cumulative;   // channel-averaged NMSE over prefixes [0, i]
  Eigen::VectorXd per_step;     // channel-averaged normalized squared error at step i
  Eigen::VectorXd horizon;      // (i + 1) * dt: time elapsed since the last known sample
};

/// Normalized mean square error of pred against truth, which must share
/// channels and time grid.
ErrorReport nmse(const TimeSeriesFrame& pred, const TimeSeriesFrame& truth,
                 Normalization normalization = Normalization::Variance);

/// Divides a time axis by a reference period (seconds > 0).
Eigen::VectorXd normalize_time(const Eigen::VectorXd& axis, double reference_period);

/// Sample instants of a frame.
Eigen::VectorXd time_axis(const TimeSeriesFrame& frame);

}  // namespace dmdkit
