#pragma once

#include "dmdkit/time_series.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dmdkit {

/// Seeded stream of uniform and standard normal draws. Built on mt19937_64,
/// whose output sequence is fixed by the C++ standard, with hand-written
/// transforms so results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct LinearSystemSpec {
  Eigen::MatrixXd A_true;
  Eigen::VectorXd x0;
  Index steps = 0;
  double dt = 1.0;
  double t0 = 0.0;
  double noise_std = 0.0;  // in units of each clean channel's standard deviation
  std::uint64_t seed = 0;
  std::vector<std::string> names;  // empty: x0, x1, ...
};

/// Row k is A_true^k x0 plus optional white noise.
TimeSeriesFrame gen_linear(const LinearSystemSpec& spec);

struct Oscillator {
  std::string name;
  double amplitude = 1.0;
  double omega = 0.0;  // rad/s
  double phase = 0.0;  // rad
  double decay = 0.0;  // 1/s
};

struct SurrogateChannel {
  std::string name;
  std::vector<double> mixing;            // weight per oscillator
  std::array<double, 3> drift{0, 0, 0};  // c0 + c1 t + c2 t^2
};

struct SurrogateSpec {
  std::vector<Oscillator> oscillators;
  std::vector<SurrogateChannel> channels;
  Index steps = 0;
  double dt = 1.0;
  double t0 = 0.0;
  // cubic distortion s + eps * s^3 / rms(s)^2 of each channel's oscillatory part
  double nonlinearity = 0.0;
  double noise_std = 0.0;  // in units of each clean channel's standard deviation
  std::uint64_t seed = 0;
};

/// channel_j(t) = sum_s M_js a_s exp(-g_s t) sin(W_s t + psi_s) + drift_j(t).
TimeSeriesFrame gen_surrogate(const SurrogateSpec& spec);

struct Preset {
  std::string name;
  std::string description;
  SurrogateSpec spec;
  Index train_len = 0;
  Index test_len = 0;
  double reference_period = 1.0;  // encounter period, seconds
};

const std::vector<std::string>& preset_names();
/// Throws ValidationError for unknown names.
Preset preset_by_name(const std::string& name);

}  // namespace dmdkit
