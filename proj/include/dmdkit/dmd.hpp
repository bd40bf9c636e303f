#pragma once

#include "dmdkit/time_series.hpp"

#include <complex>
#include <string>
#include <vector>

namespace dmdkit {

using Complex = std::complex<double>;

/// Consecutive snapshot matrices: X holds samples 0..m-2 as columns, Xp
/// holds samples 1..m-1.
struct SnapshotPair {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Xp;
  double dt = 0.0;
  double t0 = 0.0;
  std::vector<std::string> channel_names;
};

SnapshotPair build_snapshots(const TimeSeriesFrame& frame);

struct FitOptions {
  double rcond = 1e-12;
};

/// Fitted linear propagator and its eigenstructure. Modes are stored sorted
/// by participation over the training window (descending); conjugate pairs are
/// adjacent with the positive-imaginary member first.
struct DmdModel {
  Eigen::MatrixXd A;
  Eigen::VectorXcd lambdas;
  Eigen::VectorXcd omegas;          // log(lambda) / dt, principal branch; NaN where unusable
  std::vector<bool> omega_usable;   // false where |lambda| < 1e-14
  Eigen::MatrixXcd Phi;             // unit columns, largest component real-positive
  Eigen::VectorXcd b;
  double dt = 0.0;
  double t0 = 0.0;                  // time of the first training snapshot
  Index training_samples = 0;
  std::vector<std::string> channel_names;
  Eigen::VectorXd x0;
  double fit_residual = 0.0;        // ||Xp - A X||_F / ||Xp||_F
  double amplitude_residual = 0.0;  // ||Phi b - x0|| / ||x0||
  double eigenvector_condition = 0.0;
  std::vector<std::string> warnings;

  Index modes() const noexcept { return lambdas.size(); }
};

/// Eigenvalues with modulus below this have no continuous-time frequency.
inline constexpr double kUnusableEigenvalue = 1e-14;
/// Eigenvector condition numbers beyond this mean the propagator is treated
/// as defective; beyond the warning level the fit proceeds with a warning.
inline constexpr double kDefectiveCondition = 1e12;
inline constexpr double kIllConditionedWarning = 1e8;

DmdModel fit(const SnapshotPair& snap, const FitOptions& options = {});

struct AmplitudeSolution {
  Eigen::VectorXcd b;
  double residual = 0.0;
  std::vector<std::string> warnings;
};

/// Least-squares (minimum-norm when Phi is singular) solution of Phi b = x0.
AmplitudeSolution amplitudes(const Eigen::MatrixXcd& Phi, const Eigen::VectorXd& x0);

/// Unit-norm columns with the largest-magnitude component rotated onto the
/// positive real axis.
Eigen::MatrixXcd normalize_modes(const Eigen::MatrixXcd& Phi);

struct Reconstruction {
  TimeSeriesFrame frame;
  double max_imag = 0.0;
};

/// Real part of sum_j phi_j b_j exp(omega_j k dt) for k in [first, first + count),
/// with k = 0 at the first training snapshot.
Reconstruction reconstruct(const DmdModel& model, Index first, Index count);

/// reconstruct over [train_len, train_len + horizon).
Reconstruction forecast(const DmdModel& model, Index horizon, Index train_len);

/// Mean of |b_k exp(omega_k t_i)|^2 over snapshot indices [first, first + count).
Eigen::VectorXd modal_participation(const DmdModel& model, Index first, Index count);

struct ModalRow {
  Index mode = 0;  // column in the model
  Complex lambda;
  Complex omega;
  bool omega_usable = true;
  double frequency_hz = 0.0;
  double growth_rate = 0.0;
  Complex amplitude;
  double participation = 0.0;
  Eigen::VectorXd magnitudes;
};

/// One row per mode over the training window, sorted by participation.
std::vector<ModalRow> modal_table(const DmdModel& model);

struct ModeGroup {
  std::vector<Index> members;  // one mode, or a conjugate pair
  Complex lambda;              // representative with Im >= 0
  Complex omega;
  bool omega_usable = true;
  double frequency_hz = 0.0;
  double participation = 0.0;  // summed over members
  Eigen::VectorXd magnitudes;
};

/// The top_k most participating modes, conjugate partners counted once.
std::vector<ModeGroup> mode_components(const DmdModel& model, Index top_k);

}  // namespace dmdkit
