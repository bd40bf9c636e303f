#include "dmdkit/time_series.hpp"

#include "dmdkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace dmdkit {

TimeSeriesFrame::TimeSeriesFrame(std::vector<std::string> channel_names, double t0, double dt,
                                 Eigen::MatrixXd values)
    : names_(std::move(channel_names)), t0_(t0), dt_(dt), values_(std::move(values)) {
  if (names_.empty()) throw ValidationError("time series needs at least one channel");
  if (values_.rows() < 1) throw ValidationError("time series needs at least one sample");
  if (static_cast<Index>(names_.size()) != values_.cols()) {
    throw ValidationError("time series has " + std::to_string(names_.size()) + " channel names but " +
                          std::to_string(values_.cols()) + " value columns");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("sampling interval dt must be positive");
  if (!std::isfinite(t0_)) throw ValidationError("start time t0 must be finite");

  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) throw ValidationError("empty channel name");
    if (!seen.insert(name).second) throw ValidationError("duplicate channel name '" + name + "'");
  }
  for (Index c = 0; c < values_.cols(); ++c) {
    for (Index r = 0; r < values_.rows(); ++r) {
      if (!std::isfinite(values_(r, c))) {
        throw ValidationError("non-finite value in channel '" + names_[static_cast<std::size_t>(c)] +
                              "' at row " + std::to_string(r));
      }
    }
  }
}

Index TimeSeriesFrame::channel_index(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown channel '" + std::string(name) + "'");
  return static_cast<Index>(it - names_.begin());
}

bool TimeSeriesFrame::has_channel(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

TimeSeriesFrame TimeSeriesFrame::slice_rows(Index first, Index count) const {
  if (first < 0 || count < 1 || first + count > samples()) {
    throw ValidationError("row slice [" + std::to_string(first) + ", " + std::to_string(first + count) +
                          ") outside frame of " + std::to_string(samples()) + " rows");
  }
  return TimeSeriesFrame(names_, time_at(first), dt_, values_.middleRows(first, count));
}

TimeSeriesFrame TimeSeriesFrame::select_channels(const std::vector<std::string>& names) const {
  Eigen::MatrixXd out(samples(), static_cast<Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) out.col(static_cast<Index>(j)) = values_.col(channel_index(names[j]));
  return TimeSeriesFrame(names, t0_, dt_, std::move(out));
}

std::pair<TimeSeriesFrame, TimeSeriesFrame> split_train_test(const TimeSeriesFrame& frame,
                                                             const SplitSpec& spec) {
  if (spec.train_len < 2) throw ValidationError("train_len must be at least 2");
  if (spec.test_len < 1) throw ValidationError("test_len must be at least 1");
  if (spec.train_len + spec.test_len > frame.samples()) {
    throw ValidationError("train_len + test_len = " + std::to_string(spec.train_len + spec.test_len) +
                          " exceeds the " + std::to_string(frame.samples()) + " available samples");
  }
  return {frame.slice_rows(0, spec.train_len), frame.slice_rows(spec.train_len, spec.test_len)};
}

double validate_uniform_sampling(std::span<const double> times, double rel_tol) {
  if (times.size() < 2) throw ValidationError("need at least two sample instants");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ValidationError("time column is not strictly increasing at index " + std::to_string(i));
    }
  }
  const double mean_step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  double worst = -1.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double deviation = std::abs((times[i] - times[i - 1]) - mean_step);
    // later index wins near-ties so the report points at the step that broke the grid
    if (deviation >= worst - 1e-12 * mean_step) {
      worst = std::max(worst, deviation);
      worst_index = i;
    }
  }
  if (worst >= rel_tol * mean_step) {
    throw ValidationError("non-uniform sampling at index " + std::to_string(worst_index) + ": step deviates by " +
                          std::to_string(worst / mean_step) + " of the mean step (tolerance " +
                          std::to_string(rel_tol) + ")");
  }
  return mean_step;
}

TimeSeriesFrame concat_rows(const TimeSeriesFrame& head, const TimeSeriesFrame& tail) {
  if (head.channel_names() != tail.channel_names()) throw ValidationError("concat_rows: channel mismatch");
  if (head.dt() != tail.dt() || tail.t0() != head.time_at(head.samples())) {
    throw ValidationError("concat_rows: tail does not continue the head's time grid");
  }
  Eigen::MatrixXd values(head.samples() + tail.samples(), head.channels());
  values << head.values(), tail.values();
  return TimeSeriesFrame(head.channel_names(), head.t0(), head.dt(), std::move(values));
}

}  // namespace dmdkit
