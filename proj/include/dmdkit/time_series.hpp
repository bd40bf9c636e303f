#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dmdkit {

using Index = Eigen::Index;

/// Uniformly sampled multichannel series. Rows are time steps, columns are
/// channels; row k sits at t0 + k * dt. Immutable once constructed.
class TimeSeriesFrame {
 public:
  /// Throws ValidationError if names are empty or duplicated, dt is not
  /// positive, the shape disagrees with the names, or any value is not finite.
  TimeSeriesFrame(std::vector<std::string> channel_names, double t0, double dt,
                  Eigen::MatrixXd values);

  const std::vector<std::string>& channel_names() const noexcept { return names_; }
  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  Index samples() const noexcept { return values_.rows(); }
  Index channels() const noexcept { return values_.cols(); }
  double time_at(Index row) const noexcept { return t0_ + static_cast<double>(row) * dt_; }

  /// Column index of a channel; throws ValidationError if absent.
  Index channel_index(std::string_view name) const;
  bool has_channel(std::string_view name) const;

  /// Rows [first, first + count) with t0 shifted accordingly.
  TimeSeriesFrame slice_rows(Index first, Index count) const;
  /// Channels in the requested order.
  TimeSeriesFrame select_channels(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> names_;
  double t0_;
  double dt_;
  Eigen::MatrixXd values_;
};

struct SplitSpec {
  Index train_len = 0;
  Index test_len = 0;
};

/// Leading train_len rows for training, the next test_len rows for testing.
std::pair<TimeSeriesFrame, TimeSeriesFrame> split_train_test(const TimeSeriesFrame& frame,
                                                             const SplitSpec& spec);

/// Mean step of a strictly increasing time grid whose steps all lie within
/// rel_tol * mean of the mean. Errors name the offending sample index.
double validate_uniform_sampling(std::span<const double> times, double rel_tol = 1e-6);

/// Row-wise concatenation; the second frame must continue the first's grid.
TimeSeriesFrame concat_rows(const TimeSeriesFrame& head, const TimeSeriesFrame& tail);

}  // namespace dmdkit
