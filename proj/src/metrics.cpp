#include "dmdkit/metrics.hpp"

#include "dmdkit/error.hpp"

#include <cmath>

namespace dmdkit {

Normalization parse_normalization(const std::string& text) {
  if (text == "variance") return Normalization::Variance;
  if (text == "unit") return Normalization::Unit;
  throw ValidationError("normalization must be \"variance\" or \"unit\", got \"" + text + "\"");
}

std::string to_string(Normalization normalization) {
  return normalization == Normalization::Variance ? "variance" : "unit";
}

ErrorReport nmse(const TimeSeriesFrame& pred, const TimeSeriesFrame& truth, Normalization normalization) {
  if (pred.channel_names() != truth.channel_names()) throw ValidationError("nmse: channel sets differ");
  if (pred.samples() != truth.samples()) throw ValidationError("nmse: sample counts differ");
  if (pred.dt() != truth.dt() || pred.t0() != truth.t0()) throw ValidationError("nmse: time grids differ");

  const Index m = truth.samples();
  const Index n = truth.channels();
  ErrorReport report;
  report.channels = truth.channel_names();
  report.normalization = normalization;
  report.normalizer = Eigen::VectorXd::Ones(n);
  if (normalization == Normalization::Variance) {
    for (Index c = 0; c < n; ++c) {
      const auto col = truth.values().col(c);
      const double mean = col.mean();
      const double var = (col.array() - mean).square().mean();
      if (!(var > 0.0)) {
        throw ValidationError("nmse: truth channel '" + report.channels[static_cast<std::size_t>(c)] +
                              "' has zero variance; use unit normalization");
      }
      report.normalizer(c) = var;
    }
  }

  const Eigen::ArrayXXd sq = (pred.values() - truth.values()).array().square();
  // normalized squared error, rows = steps
  Eigen::ArrayXXd e = sq.rowwise() / report.normalizer.transpose().array();
  report.per_channel = e.colwise().mean().transpose();
  report.average = report.per_channel.mean();
  report.per_step = e.rowwise().mean().matrix();

  report.cumulative.resize(m);
  Eigen::ArrayXd running = Eigen::ArrayXd::Zero(n);
  for (Index i = 0; i < m; ++i) {
    running += e.row(i).transpose();
    report.cumulative(i) = (running / static_cast<double>(i + 1)).mean();
  }
  report.horizon.resize(m);
  for (Index i = 0; i < m; ++i) report.horizon(i) = static_cast<double>(i + 1) * truth.dt();
  return report;
}

Eigen::VectorXd normalize_time(const Eigen::VectorXd& axis, double reference_period) {
  if (!(reference_period > 0.0) || !std::isfinite(reference_period)) {
    throw ValidationError("reference period must be positive");
  }
  return axis / reference_period;
}

Eigen::VectorXd time_axis(const TimeSeriesFrame& frame) {
  Eigen::VectorXd t(frame.samples());
  for (Index i = 0; i < frame.samples(); ++i) t(i) = frame.time_at(i);
  return t;
}

}  // namespace dmdkit
