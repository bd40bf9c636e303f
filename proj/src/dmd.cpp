#include "dmdkit/dmd.hpp"

#include "dmdkit/error.hpp"
#include "dmdkit/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace dmdkit {

SnapshotPair build_snapshots(const TimeSeriesFrame& frame) {
  const Index m = frame.samples();
  if (m < 3) throw ValidationError("snapshot assembly needs at least 3 samples, got " + std::to_string(m));
  SnapshotPair snap;
  const Eigen::MatrixXd cols = frame.values().transpose();
  snap.X = cols.leftCols(m - 1);
  snap.Xp = cols.rightCols(m - 1);
  snap.dt = frame.dt();
  snap.t0 = frame.t0();
  snap.channel_names = frame.channel_names();
  return snap;
}

Eigen::MatrixXcd normalize_modes(const Eigen::MatrixXcd& Phi) {
  Eigen::MatrixXcd out = Phi;
  for (Index j = 0; j < out.cols(); ++j) {
    auto col = out.col(j);
    const double norm = col.norm();
    if (norm == 0.0) continue;
    col /= norm;
    const Eigen::VectorXd mags = col.cwiseAbs();
    const double peak = mags.maxCoeff();
    // first index within round-off of the peak, so conjugate columns agree
    Index pivot = 0;
    while (mags(pivot) < peak * (1.0 - 1e-12)) ++pivot;
    const Complex p = col(pivot);
    col *= std::conj(p) / std::abs(p);
    col(pivot) = Complex(std::abs(col(pivot)), 0.0);
  }
  return out;
}

AmplitudeSolution amplitudes(const Eigen::MatrixXcd& Phi, const Eigen::VectorXd& x0) {
  if (Phi.rows() != Phi.cols()) throw ValidationError("mode matrix must be square");
  if (Phi.rows() != x0.size()) throw ValidationError("initial condition length does not match the mode matrix");
  AmplitudeSolution sol;
  const Eigen::VectorXcd rhs = x0.cast<Complex>();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(Phi);
  sol.b = cod.solve(rhs);
  if (cod.rank() < Phi.cols()) {
    sol.warnings.push_back("mode matrix is singular (rank " + std::to_string(cod.rank()) + " of " +
                           std::to_string(Phi.cols()) + "); amplitudes are the minimum-norm least-squares solution");
  }
  const double scale = x0.norm();
  sol.residual = scale > 0.0 ? (Phi * sol.b - rhs).norm() / scale : (Phi * sol.b).norm();
  if (sol.residual > 1e-6) {
    std::ostringstream msg;
    msg << "amplitude fit residual " << sol.residual << " exceeds 1e-6";
    sol.warnings.push_back(msg.str());
  }
  return sol;
}

namespace {

// Pair each complex eigenvalue with its conjugate and make the pair exactly
// symmetric (eigenvalue and eigenvector). Returns partner index or -1.
std::vector<Index> pair_conjugates(Eigen::VectorXcd& lambdas, Eigen::MatrixXcd& Phi) {
  const Index n = lambdas.size();
  std::vector<Index> partner(static_cast<std::size_t>(n), -1);
  for (Index j = 0; j < n; ++j) {
    if (lambdas(j).imag() <= 0.0 || partner[static_cast<std::size_t>(j)] >= 0) continue;
    Index best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (k == j || partner[static_cast<std::size_t>(k)] >= 0 || lambdas(k).imag() >= 0.0) continue;
      const double gap = std::abs(lambdas(k) - std::conj(lambdas(j)));
      if (gap < best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    if (best < 0 || best_gap > 1e-10 * std::max(1.0, std::abs(lambdas(j)))) {
      throw NumericalError("eigenvalue " + std::to_string(lambdas(j).real()) + "+" +
                           std::to_string(lambdas(j).imag()) + "i has no conjugate partner");
    }
    partner[static_cast<std::size_t>(j)] = best;
    partner[static_cast<std::size_t>(best)] = j;
    lambdas(best) = std::conj(lambdas(j));
    Phi.col(best) = Phi.col(j).conjugate();
  }
  for (Index j = 0; j < n; ++j) {
    if (lambdas(j).imag() < 0.0 && partner[static_cast<std::size_t>(j)] < 0) {
      throw NumericalError("unpaired complex eigenvalue in the spectrum of a real propagator");
    }
  }
  return partner;
}

template <typename Vec>
Vec permute(const Vec& v, const std::vector<Index>& order) {
  Vec out(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) out(static_cast<Index>(i)) = v(order[i]);
  return out;
}

}  // namespace

DmdModel fit(const SnapshotPair& snap, const FitOptions& options) {
  const Index n = snap.X.rows();
  const Index cols = snap.X.cols();
  if (n == 0 || cols == 0) throw ValidationError("empty snapshot matrices");
  if (snap.Xp.rows() != n || snap.Xp.cols() != cols) throw ValidationError("X and X' differ in shape");
  if (static_cast<Index>(snap.channel_names.size()) != n) throw ValidationError("channel names do not match X");
  if (!(snap.dt > 0.0)) throw ValidationError("dt must be positive");

  DmdModel model;
  model.dt = snap.dt;
  model.t0 = snap.t0;
  model.training_samples = cols + 1;
  model.channel_names = snap.channel_names;
  model.x0 = snap.X.col(0);
  if (n > cols) {
    model.warnings.push_back("under-determined fit: " + std::to_string(n) + " channels but only " +
                             std::to_string(cols) + " snapshot pairs");
  }

  model.A = snap.Xp * pseudoinverse(snap.X, options.rcond);
  const double xp_norm = snap.Xp.norm();
  const double miss = (snap.Xp - model.A * snap.X).norm();
  model.fit_residual = xp_norm > 0.0 ? miss / xp_norm : miss;

  Eigen::EigenSolver<Eigen::MatrixXd> es(model.A, true);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the fitted propagator did not converge");
  }
  Eigen::VectorXcd lambdas = es.eigenvalues();
  Eigen::MatrixXcd Phi = normalize_modes(es.eigenvectors());
  if (!lambdas.allFinite() || !Phi.allFinite()) throw NumericalError("non-finite eigenpairs of the fitted propagator");
  const auto partner = pair_conjugates(lambdas, Phi);

  model.eigenvector_condition = condition_number(Phi);
  if (!(model.eigenvector_condition <= kDefectiveCondition)) {
    std::ostringstream msg;
    msg << "fitted propagator is defective or nearly so: eigenvector matrix condition number "
        << model.eigenvector_condition << " (limit " << kDefectiveCondition << ")";
    throw NumericalError(msg.str());
  }
  if (model.eigenvector_condition > kIllConditionedWarning) {
    std::ostringstream msg;
    msg << "ill-conditioned eigenvector matrix (condition number " << model.eigenvector_condition << ")";
    model.warnings.push_back(msg.str());
  }

  auto sol = amplitudes(Phi, model.x0);
  for (auto& w : sol.warnings) model.warnings.push_back(std::move(w));
  // real data: conjugate modes carry conjugate amplitudes, real modes real ones
  for (Index j = 0; j < n; ++j) {
    const Index k = partner[static_cast<std::size_t>(j)];
    if (k < 0) {
      if (lambdas(j).imag() == 0.0) sol.b(j) = Complex(sol.b(j).real(), 0.0);
    } else if (j < k) {
      const Complex mean = 0.5 * (sol.b(j) + std::conj(sol.b(k)));
      sol.b(j) = mean;
      sol.b(k) = std::conj(mean);
    }
  }

  const double x0_norm = model.x0.norm();
  const double amp_miss = (Phi * sol.b - model.x0.cast<Complex>()).norm();
  model.amplitude_residual = x0_norm > 0.0 ? amp_miss / x0_norm : amp_miss;

  model.lambdas = lambdas;
  model.Phi = Phi;
  model.b = sol.b;
  model.omegas.resize(n);
  model.omega_usable.assign(static_cast<std::size_t>(n), true);
  Index unusable = 0;
  for (Index j = 0; j < n; ++j) {
    if (std::abs(lambdas(j)) < kUnusableEigenvalue) {
      model.omega_usable[static_cast<std::size_t>(j)] = false;
      model.omegas(j) = Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
      ++unusable;
    } else {
      model.omegas(j) = std::log(lambdas(j)) / model.dt;
    }
  }
  if (unusable > 0) {
    model.warnings.push_back(std::to_string(unusable) +
                             " mode(s) with |lambda| < 1e-14 have no continuous frequency and are left out of "
                             "reconstruction");
  }

  const Eigen::VectorXd part = modal_participation(model, 0, model.training_samples);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index c) {
    if (part(a) != part(c)) return part(a) > part(c);
    if (lambdas(a).imag() != lambdas(c).imag()) return lambdas(a).imag() > lambdas(c).imag();
    return a < c;
  });

  model.lambdas = permute(model.lambdas, order);
  model.omegas = permute(model.omegas, order);
  model.b = permute(model.b, order);
  Eigen::MatrixXcd sorted(n, n);
  std::vector<bool> usable(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.col(static_cast<Index>(i)) = model.Phi.col(order[i]);
    usable[i] = model.omega_usable[static_cast<std::size_t>(order[i])];
  }
  model.Phi = std::move(sorted);
  model.omega_usable = std::move(usable);
  return model;
}

Eigen::VectorXd modal_participation(const DmdModel& model, Index first, Index count) {
  if (first < 0 || count < 1) throw ValidationError("participation window must be non-empty and non-negative");
  const Index n = model.modes();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    const double b2 = std::norm(model.b(j));
    if (b2 == 0.0) continue;
    double acc = 0.0;
    if (model.omega_usable[static_cast<std::size_t>(j)]) {
      const double growth = model.omegas(j).real();
      for (Index i = first; i < first + count; ++i) acc += std::exp(2.0 * growth * static_cast<double>(i) * model.dt);
    } else {
      const double mag = std::abs(model.lambdas(j));
      for (Index i = first; i < first + count; ++i) acc += std::pow(mag, 2.0 * static_cast<double>(i));
    }
    out(j) = b2 * acc / static_cast<double>(count);
  }
  return out;
}

Reconstruction reconstruct(const DmdModel& model, Index first, Index count) {
  if (first < 0 || count < 1) throw ValidationError("reconstruction range must be non-empty and non-negative");
  const Index n = model.modes();

  bool any_unusable = false;
  for (bool u : model.omega_usable) any_unusable = any_unusable || !u;
  if (any_unusable) {
    const Eigen::VectorXd part = modal_participation(model, 0, model.training_samples);
    const double total = part.sum();
    for (Index j = 0; j < n; ++j) {
      if (!model.omega_usable[static_cast<std::size_t>(j)] && part(j) > 1e-6 * total) {
        throw NumericalError("mode " + std::to_string(j) + " has |lambda| < 1e-14 but carries " +
                             std::to_string(part(j) / total) + " of the participation; cannot reconstruct");
      }
    }
  }

  Eigen::MatrixXd values(count, n);
  double max_imag = 0.0;
  Eigen::VectorXcd q(n);
  for (Index r = 0; r < count; ++r) {
    const double t = static_cast<double>(first + r) * model.dt;
    for (Index j = 0; j < n; ++j) {
      q(j) = model.omega_usable[static_cast<std::size_t>(j)] ? model.b(j) * std::exp(model.omegas(j) * t)
                                                              : Complex(0.0, 0.0);
    }
    const Eigen::VectorXcd x = model.Phi * q;
    values.row(r) = x.real().transpose();
    max_imag = std::max(max_imag, x.imag().cwiseAbs().maxCoeff());
  }
  if (!values.allFinite()) throw NumericalError("reconstruction overflowed (growing modes over a long horizon)");
  const double peak = values.cwiseAbs().maxCoeff();
  if (max_imag > 1e-8 * peak && max_imag > 0.0) {
    std::ostringstream msg;
    msg << "reconstruction is not real: max imaginary part " << max_imag << " against peak value " << peak;
    throw NumericalError(msg.str());
  }
  TimeSeriesFrame frame(model.channel_names, model.t0 + static_cast<double>(first) * model.dt, model.dt,
                        std::move(values));
  return {std::move(frame), max_imag};
}

Reconstruction forecast(const DmdModel& model, Index horizon, Index train_len) {
  if (horizon < 1) throw ValidationError("forecast horizon must be at least 1");
  if (train_len < 0) throw ValidationError("train_len must be non-negative");
  return reconstruct(model, train_len, horizon);
}

namespace {

double frequency_hz(const DmdModel& model, Index j) {
  return model.omega_usable[static_cast<std::size_t>(j)] ? model.omegas(j).imag() / (2.0 * std::numbers::pi) : 0.0;
}

}  // namespace

std::vector<ModalRow> modal_table(const DmdModel& model) {
  const Eigen::VectorXd part = modal_participation(model, 0, model.training_samples);
  std::vector<Index> order(static_cast<std::size_t>(model.modes()));
  std::iota(order.begin(), order.end(), Index{0});
  // the model is stored sorted; re-sorting keeps hand-built models honest
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index c) {
    if (part(a) != part(c)) return part(a) > part(c);
    return model.lambdas(a).imag() > model.lambdas(c).imag();
  });
  std::vector<ModalRow> rows;
  for (Index j : order) {
    ModalRow row;
    row.mode = j;
    row.lambda = model.lambdas(j);
    row.omega = model.omegas(j);
    row.omega_usable = model.omega_usable[static_cast<std::size_t>(j)];
    row.frequency_hz = frequency_hz(model, j);
    row.growth_rate = row.omega_usable ? row.omega.real() : -std::numeric_limits<double>::infinity();
    row.amplitude = model.b(j);
    row.participation = part(j);
    row.magnitudes = model.Phi.col(j).cwiseAbs();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ModeGroup> mode_components(const DmdModel& model, Index top_k) {
  const Index n = model.modes();
  if (top_k < 1 || top_k > n) {
    throw ValidationError("top_k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(top_k));
  }
  const auto rows = modal_table(model);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<ModeGroup> groups;
  for (std::size_t r = 0; r < rows.size() && static_cast<Index>(groups.size()) < top_k; ++r) {
    const Index j = rows[r].mode;
    if (used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(j)] = true;
    ModeGroup g;
    g.members.push_back(j);
    Index rep = j;
    if (rows[r].lambda.imag() != 0.0) {
      const Complex target = std::conj(rows[r].lambda);
      const double tol = 1e-10 * std::max(1.0, std::abs(target));
      for (Index k = 0; k < n; ++k) {
        if (used[static_cast<std::size_t>(k)] || std::abs(model.lambdas(k) - target) > tol) continue;
        used[static_cast<std::size_t>(k)] = true;
        g.members.push_back(k);
        if (model.lambdas(k).imag() > 0.0) rep = k;
        break;
      }
    }
    g.lambda = model.lambdas(rep);
    g.omega = model.omegas(rep);
    g.omega_usable = model.omega_usable[static_cast<std::size_t>(rep)];
    g.frequency_hz = frequency_hz(model, rep);
    for (const auto& row : rows) {
      for (Index m : g.members) {
        if (row.mode == m) g.participation += row.participation;
      }
    }
    g.magnitudes = model.Phi.col(rep).cwiseAbs();
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace dmdkit
