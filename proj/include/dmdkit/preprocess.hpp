#pragma once

#include "dmdkit/time_series.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dmdkit {

struct StandardizationParams {
  std::vector<std::string> channels;
  Eigen::VectorXd mean;
  Eigen::VectorXd std;  // population convention (divisor m), strictly positive
};

/// Statistics of every channel; throws ValidationError naming the first
/// constant channel.
StandardizationParams fit_standardization(const TimeSeriesFrame& frame);

/// (x - mean) / std using params looked up by channel name.
TimeSeriesFrame apply_standardization(const TimeSeriesFrame& frame, const StandardizationParams& params);

std::pair<TimeSeriesFrame, StandardizationParams> standardize(const TimeSeriesFrame& frame);

/// x * std + mean. The frame's channels must match params exactly, in order.
TimeSeriesFrame destandardize(const TimeSeriesFrame& frame, const StandardizationParams& params);

struct AugmentationSpec {
  int max_derivative_order = 2;
  int stencil_order = 4;
};

/// Fourth-order finite-difference derivative of each column (order 1 or 2).
/// Interior rows use central stencils, the two rows at either end use
/// one-sided stencils. Needs at least 5 rows.
Eigen::MatrixXd differentiate(const Eigen::MatrixXd& values, double dt, int order);

/// Appends "<name>_d1" (and "<name>_d2") channels after the base channels.
TimeSeriesFrame augment_derivatives(const TimeSeriesFrame& frame, const AugmentationSpec& spec);

}  // namespace dmdkit
