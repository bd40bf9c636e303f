#include "dmdkit/preprocess.hpp"

#include "dmdkit/error.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace dmdkit {

StandardizationParams fit_standardization(const TimeSeriesFrame& frame) {
  const auto m = static_cast<double>(frame.samples());
  StandardizationParams p;
  p.channels = frame.channel_names();
  p.mean.resize(frame.channels());
  p.std.resize(frame.channels());
  for (Index c = 0; c < frame.channels(); ++c) {
    const auto col = frame.values().col(c);
    const double mean = col.sum() / m;
    const double var = (col.array() - mean).square().sum() / m;
    const double sd = std::sqrt(var);
    const double scale = col.cwiseAbs().maxCoeff();
    // spread indistinguishable from rounding of the values themselves
    if (!(sd > 64.0 * std::numeric_limits<double>::epsilon() * scale) || sd == 0.0) {
      throw ValidationError("channel '" + p.channels[static_cast<std::size_t>(c)] +
                            "' has zero variance; exclude it from the column selection");
    }
    p.mean(c) = mean;
    p.std(c) = sd;
  }
  return p;
}

namespace {

Index param_index(const StandardizationParams& params, const std::string& name) {
  for (std::size_t i = 0; i < params.channels.size(); ++i) {
    if (params.channels[i] == name) return static_cast<Index>(i);
  }
  throw ValidationError("no standardization parameters for channel '" + name + "'");
}

}  // namespace

TimeSeriesFrame apply_standardization(const TimeSeriesFrame& frame, const StandardizationParams& params) {
  Eigen::MatrixXd out = frame.values();
  for (Index c = 0; c < frame.channels(); ++c) {
    const Index k = param_index(params, frame.channel_names()[static_cast<std::size_t>(c)]);
    out.col(c) = (out.col(c).array() - params.mean(k)) / params.std(k);
  }
  return TimeSeriesFrame(frame.channel_names(), frame.t0(), frame.dt(), std::move(out));
}

std::pair<TimeSeriesFrame, StandardizationParams> standardize(const TimeSeriesFrame& frame) {
  auto params = fit_standardization(frame);
  Eigen::MatrixXd z = apply_standardization(frame, params).values();
  // The rounding of the mean itself is magnified by mean/std. Removing the
  // leftover offset after scaling keeps large-offset channels centred.
  for (Index c = 0; c < z.cols(); ++c) {
    const double residual = z.col(c).mean();
    z.col(c).array() -= residual;
    params.mean(c) += residual * params.std(c);
  }
  return {TimeSeriesFrame(frame.channel_names(), frame.t0(), frame.dt(), std::move(z)), std::move(params)};
}

TimeSeriesFrame destandardize(const TimeSeriesFrame& frame, const StandardizationParams& params) {
  if (frame.channel_names() != params.channels) {
    throw ValidationError("destandardize: frame channels do not match the standardization parameters");
  }
  Eigen::MatrixXd out = frame.values();
  for (Index c = 0; c < frame.channels(); ++c) out.col(c) = out.col(c).array() * params.std(c) + params.mean(c);
  return TimeSeriesFrame(frame.channel_names(), frame.t0(), frame.dt(), std::move(out));
}

namespace {

// Weights over offsets -2..2 (central) or 0..k (forward), all over 12.
constexpr std::array<double, 5> kD1Central{1, -8, 0, 8, -1};
constexpr std::array<double, 5> kD2Central{-1, 16, -30, 16, -1};
constexpr std::array<double, 5> kD1Row0{-25, 48, -36, 16, -3};      // offsets 0..4
constexpr std::array<double, 5> kD1Row1{-3, -10, 18, -6, 1};        // offsets -1..3
constexpr std::array<double, 6> kD2Row0{45, -154, 214, -156, 61, -10};  // offsets 0..5
constexpr std::array<double, 6> kD2Row1{10, -15, -4, 14, -6, 1};        // offsets -1..4
// five-point fallbacks for m == 5, exact on quartics but third order
constexpr std::array<double, 5> kD2Row0Short{35, -104, 114, -56, 11};
constexpr std::array<double, 5> kD2Row1Short{11, -20, 6, 4, -1};

template <std::size_t N>
double apply(const Eigen::MatrixXd& v, Index c, Index start, const std::array<double, N>& w, int step) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) acc += w[i] * v(start + step * static_cast<Index>(i), c);
  return acc;
}

}  // namespace

Eigen::MatrixXd differentiate(const Eigen::MatrixXd& values, double dt, int order) {
  const Index m = values.rows();
  if (m < 5) throw ValidationError("derivative stencils need at least 5 samples, got " + std::to_string(m));
  if (order != 1 && order != 2) throw ValidationError("unsupported derivative order " + std::to_string(order));
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");

  Eigen::MatrixXd out(m, values.cols());
  const double scale = order == 1 ? 12.0 * dt : 12.0 * dt * dt;
  // odd derivatives flip sign when the stencil is mirrored onto the last rows
  const double mirror = order == 1 ? -1.0 : 1.0;
  const bool long_d2 = m >= 6;

  for (Index c = 0; c < values.cols(); ++c) {
    for (Index i = 2; i < m - 2; ++i) {
      out(i, c) = (order == 1 ? apply(values, c, i - 2, kD1Central, 1) : apply(values, c, i - 2, kD2Central, 1)) / scale;
    }
    double r0, r1, e0, e1;
    if (order == 1) {
      r0 = apply(values, c, 0, kD1Row0, 1);
      r1 = apply(values, c, 0, kD1Row1, 1);
      e0 = apply(values, c, m - 1, kD1Row0, -1);
      e1 = apply(values, c, m - 1, kD1Row1, -1);
    } else if (long_d2) {
      r0 = apply(values, c, 0, kD2Row0, 1);
      r1 = apply(values, c, 0, kD2Row1, 1);
      e0 = apply(values, c, m - 1, kD2Row0, -1);
      e1 = apply(values, c, m - 1, kD2Row1, -1);
    } else {
      r0 = apply(values, c, 0, kD2Row0Short, 1);
      r1 = apply(values, c, 0, kD2Row1Short, 1);
      e0 = apply(values, c, m - 1, kD2Row0Short, -1);
      e1 = apply(values, c, m - 1, kD2Row1Short, -1);
    }
    out(0, c) = r0 / scale;
    out(1, c) = r1 / scale;
    out(m - 1, c) = mirror * e0 / scale;
    out(m - 2, c) = mirror * e1 / scale;
  }
  return out;
}

TimeSeriesFrame augment_derivatives(const TimeSeriesFrame& frame, const AugmentationSpec& spec) {
  if (spec.stencil_order != 4) throw ValidationError("only fourth-order stencils are supported");
  if (spec.max_derivative_order < 0 || spec.max_derivative_order > 2) {
    throw ValidationError("max_derivative_order must be 0, 1 or 2");
  }
  if (frame.samples() < 5) {
    throw ValidationError("derivative augmentation needs at least 5 samples, got " + std::to_string(frame.samples()));
  }
  if (spec.max_derivative_order == 0) return frame;

  const Index n = frame.channels();
  Eigen::MatrixXd out(frame.samples(), n * (1 + spec.max_derivative_order));
  std::vector<std::string> names = frame.channel_names();
  out.leftCols(n) = frame.values();
  for (int order = 1; order <= spec.max_derivative_order; ++order) {
    out.middleCols(n * order, n) = differentiate(frame.values(), frame.dt(), order);
    for (const auto& base : frame.channel_names()) names.push_back(base + "_d" + std::to_string(order));
  }
  return TimeSeriesFrame(std::move(names), frame.t0(), frame.dt(), std::move(out));
}

}  // namespace dmdkit
