#include "dmdkit/synthetic.hpp"

#include "dmdkit/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace dmdkit {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

void add_noise(Eigen::MatrixXd& values, double noise_std, std::uint64_t seed) {
  if (noise_std == 0.0) return;
  Rng rng(seed);
  for (Index c = 0; c < values.cols(); ++c) {
    const auto col = values.col(c);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().mean());
    const double scale = noise_std * (sd > 0.0 ? sd : 1.0);
    for (Index r = 0; r < values.rows(); ++r) values(r, c) += scale * rng.normal();
  }
}

std::vector<std::string> default_names(Index n) {
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace

TimeSeriesFrame gen_linear(const LinearSystemSpec& spec) {
  const Index n = spec.A_true.rows();
  if (n < 1 || spec.A_true.cols() != n) throw ValidationError("A_true must be a non-empty square matrix");
  if (spec.x0.size() != n) throw ValidationError("x0 length does not match A_true");
  if (spec.steps < 3) throw ValidationError("linear system needs at least 3 steps");
  if (!(spec.dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(spec.noise_std >= 0.0)) throw ValidationError("noise_std must be non-negative");
  const double radius = Eigen::EigenSolver<Eigen::MatrixXd>(spec.A_true, false).eigenvalues().cwiseAbs().maxCoeff();
  if (!(radius <= 1.5)) {
    throw ValidationError("spectral radius " + std::to_string(radius) + " of A_true exceeds 1.5");
  }
  auto names = spec.names.empty() ? default_names(n) : spec.names;

  Eigen::MatrixXd values(spec.steps, n);
  Eigen::VectorXd x = spec.x0;
  for (Index k = 0; k < spec.steps; ++k) {
    values.row(k) = x.transpose();
    x = spec.A_true * x;
  }
  add_noise(values, spec.noise_std, spec.seed);
  return TimeSeriesFrame(std::move(names), spec.t0, spec.dt, std::move(values));
}

TimeSeriesFrame gen_surrogate(const SurrogateSpec& spec) {
  const auto K = spec.oscillators.size();
  if (K == 0) throw ValidationError("surrogate needs at least one oscillator");
  if (spec.channels.empty()) throw ValidationError("surrogate needs at least one channel");
  if (spec.steps < 2) throw ValidationError("surrogate needs at least 2 steps");
  if (!(spec.dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(spec.noise_std >= 0.0)) throw ValidationError("noise_std must be non-negative");
  const double nyquist = std::numbers::pi / spec.dt;
  for (const auto& osc : spec.oscillators) {
    if (!(std::abs(osc.omega) < nyquist)) {
      throw ValidationError("oscillator '" + osc.name + "' frequency " + std::to_string(osc.omega) +
                            " rad/s is at or above the Nyquist limit " + std::to_string(nyquist));
    }
  }

  Eigen::MatrixXd sources(spec.steps, static_cast<Index>(K));
  for (Index r = 0; r < spec.steps; ++r) {
    const double t = static_cast<double>(r) * spec.dt;
    for (std::size_t s = 0; s < K; ++s) {
      const auto& o = spec.oscillators[s];
      sources(r, static_cast<Index>(s)) = o.amplitude * std::exp(-o.decay * t) * std::sin(o.omega * t + o.phase);
    }
  }

  std::vector<std::string> names;
  Eigen::MatrixXd values(spec.steps, static_cast<Index>(spec.channels.size()));
  for (std::size_t c = 0; c < spec.channels.size(); ++c) {
    const auto& ch = spec.channels[c];
    if (ch.mixing.size() != K) {
      throw ValidationError("channel '" + ch.name + "' has " + std::to_string(ch.mixing.size()) +
                            " mixing weights for " + std::to_string(K) + " oscillators");
    }
    names.push_back(ch.name);
    const Eigen::Map<const Eigen::VectorXd> w(ch.mixing.data(), static_cast<Index>(K));
    Eigen::VectorXd s = sources * w;
    if (spec.nonlinearity != 0.0) {
      const double ms = s.squaredNorm() / static_cast<double>(s.size());
      if (ms > 0.0) s = s.array() + spec.nonlinearity * s.array().cube() / ms;
    }
    for (Index r = 0; r < spec.steps; ++r) {
      const double t = static_cast<double>(r) * spec.dt;
      s(r) += ch.drift[0] + ch.drift[1] * t + ch.drift[2] * t * t;
    }
    values.col(static_cast<Index>(c)) = s;
  }
  add_noise(values, spec.noise_std, spec.seed);
  return TimeSeriesFrame(std::move(names), spec.t0, spec.dt, std::move(values));
}

namespace {

// Course keeping in irregular head waves: one oscillator at the encounter
// frequency drives every channel (roll strongest), weaker sources fill the
// remaining directions. The cubic distortion bends the otherwise linear
// signal so forecasts degrade after roughly two encounter periods.
Preset make_5415m_like() {
  constexpr double dt = 0.01;
  constexpr double encounter_period = 353.2 * dt;  // 1766 steps ~ 5 periods
  constexpr double we = 2.0 * std::numbers::pi / encounter_period;
  const std::vector<std::string> channel_names{"surge", "sway", "heave", "roll", "pitch", "yaw", "rudder"};
  const double ratio[7] = {1.0, 0.35, 0.62, 0.81, 1.27, 1.52, 0.5};
  const double amp[7] = {1.0, 0.1, 0.04, 0.04, 0.03, 0.03, 0.04};
  const double phase[7] = {0.3, 1.9, 4.1, 2.6, 0.9, 5.3, 3.4};
  // mixing[oscillator][channel]
  const double mixing[7][7] = {
      {0.30, 0.40, 0.45, 1.00, 0.65, 0.55, 0.75}, {1.00, 1.00, 0.05, 0.05, 0.05, 0.60, 0.30},
      {0.6, -0.4, 0.8, 0.3, -0.7, 0.2, 0.5},      {-0.5, 0.7, 0.3, -0.6, 0.4, 0.8, -0.2},
      {0.4, 0.3, -0.6, 0.5, 0.7, -0.3, 0.6},      {0.7, -0.6, 0.2, 0.4, -0.3, 0.5, -0.8},
      {-0.3, 0.5, 0.7, -0.2, 0.6, -0.7, 0.4},
  };

  Preset p;
  p.name = "5415m-like";
  p.description = "7 motion/control channels, dominant encounter-frequency oscillation, 1766 + 1766 steps";
  p.train_len = 1766;
  p.test_len = 1766;
  p.reference_period = encounter_period;
  auto& s = p.spec;
  s.steps = 3532;
  s.dt = dt;
  s.nonlinearity = 0.0065;
  s.noise_std = 0.0;
  s.seed = 5415;
  for (int k = 0; k < 7; ++k) {
    s.oscillators.push_back({k == 0 ? "encounter" : "source" + std::to_string(k), amp[k], ratio[k] * we, phase[k], 0.0});
  }
  for (int c = 0; c < 7; ++c) {
    SurrogateChannel ch;
    ch.name = channel_names[static_cast<std::size_t>(c)];
    for (int k = 0; k < 7; ++k) ch.mixing.push_back(mixing[k][c]);
    s.channels.push_back(std::move(ch));
  }
  return p;
}

// Turning circle in regular waves: the trajectory swings round at the turn
// rate while motions and forces settle exponentially onto a steady turn,
// with a small wave-induced ripple. Large steady offsets make the
// zero-frequency mode dominant.
Preset make_kcs_like() {
  constexpr double dt = 0.04;
  constexpr double encounter_period = 33.0 * dt;
  constexpr double we = 2.0 * std::numbers::pi / encounter_period;
  constexpr double settle = 0.3;  // 1/s
  constexpr double turn = 0.3;    // rad/s
  constexpr double wave = 0.1;
  constexpr double radius = 3.0;
  constexpr double half_pi = std::numbers::pi / 2.0;

  Preset p;
  p.name = "kcs-like";
  p.description = "13 trajectory/motion/force channels of a turning manoeuvre, 132 + 132 steps";
  p.train_len = 132;
  p.test_len = 132;
  p.reference_period = encounter_period;
  auto& s = p.spec;
  s.steps = 264;
  s.dt = dt;
  s.nonlinearity = 0.0;
  s.noise_std = 1e-4;
  s.seed = 2023;
  s.oscillators = {
      {"settle", 1.0, 0.0, half_pi, settle},  // exp(-settle t)
      {"turn_sin", 1.0, turn, 0.0, 0.0},
      {"turn_cos", 1.0, turn, half_pi, 0.0},
      {"wave_a", wave, we, 0.4, 0.0},
      {"wave_b", wave, we, 1.7, 0.0},
  };
  // mixing over {settle, turn_sin, turn_cos, wave_a, wave_b}, then constant offset
  s.channels = {
      {"x", {0, radius, 0, 0, 0}, {0, 0, 0}},
      {"y", {0, 0, -radius, 0, 0}, {radius, 0, 0}},
      {"z", {0.004, 0, 0, 0.002, 0}, {-0.004, 0, 0}},
      {"pitch", {0.3, 0, 0, 0, 0.1}, {0, 0, 0}},
      {"roll", {-3.0, 0, 0, 0.2, 0}, {3.0, 0, 0}},
      {"turn_rate", {-12.0, 0, 0, 0, 0.5}, {12.0, 0, 0}},
      {"u", {0.25, 0, 0, 0.004, 0}, {0.55, 0, 0}},
      {"v", {0.08, 0, 0, 0, 0.002}, {-0.08, 0, 0}},
      {"w", {0.003, 0, 0, 0, 0.002}, {0, 0, 0}},
      {"rudder", {0, 0, 0, 0.05, 0}, {35.0, 0, 0}},
      {"thrust", {-0.8, 0, 0, 0, 0.03}, {3.8, 0, 0}},
      {"torque", {-0.02, 0, 0, 0, 0.001}, {0.11, 0, 0}},
      {"speed", {0.26, 0, 0, 0.004, 0}, {0.56, 0, 0}},
  };
  return p;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"5415m-like", "kcs-like"};
  return names;
}

Preset preset_by_name(const std::string& name) {
  if (name == "5415m-like") return make_5415m_like();
  if (name == "kcs-like") return make_kcs_like();
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace dmdkit
