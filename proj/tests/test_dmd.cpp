#include "dmdkit/dmd.hpp"
#include "dmdkit/error.hpp"
#include "dmdkit/preprocess.hpp"
#include "dmdkit/synthetic.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace dmdkit;
using cd = std::complex<double>;

namespace {

TimeSeriesFrame frame_of(const Eigen::MatrixXd& values, double dt = 1.0) {
  std::vector<std::string> names;
  for (Index i = 0; i < values.cols(); ++i) names.push_back("x" + std::to_string(i));
  return TimeSeriesFrame(names, 0.0, dt, values);
}

DmdModel fit_trajectory(const Eigen::MatrixXd& A, const Eigen::VectorXd& x0, Index m, double dt = 1.0) {
  return fit(build_snapshots(frame_of(oracle::iterate(A, x0, m), dt)));
}

Eigen::Matrix2d rotation(double th) {
  Eigen::Matrix2d r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

double total(const Eigen::VectorXd& v) { return v.sum(); }

}  // namespace

TEST_SUITE("dmd") {
  TEST_CASE("snapshot assembly") {
    Eigen::MatrixXd v(3, 2);
    v << 1, 2, 3, 4, 5, 6;
    const auto s = build_snapshots(frame_of(v));
    Eigen::MatrixXd X(2, 2), Xp(2, 2);
    X << 1, 3, 2, 4;
    Xp << 3, 5, 4, 6;
    CHECK(s.X == X);
    CHECK(s.Xp == Xp);
    CHECK_THROWS_AS(build_snapshots(frame_of(Eigen::MatrixXd::Ones(2, 2))), ValidationError);

    oracle::Gen g(1);
    CHECK(build_snapshots(frame_of(g.matrix(1766, 21))).X.cols() == 1765);
    const auto k = build_snapshots(frame_of(g.matrix(132, 39)));
    CHECK(k.X.rows() == 39);
    CHECK(k.X.cols() == 131);
  }

  TEST_CASE("property: shift consistency") {
    oracle::Gen g(3);
    for (int t = 0; t < 20; ++t) {
      const auto s = build_snapshots(frame_of(g.matrix(g.integer(3, 30), g.integer(1, 5))));
      CHECK(s.X.rightCols(s.X.cols() - 1) == s.Xp.leftCols(s.Xp.cols() - 1));
    }
  }

  TEST_CASE("upper-triangular example recovered") {
    Eigen::Matrix2d A;
    A << 0.9, 0.1, 0.0, 0.8;
    const auto model = fit_trajectory(A, Eigen::Vector2d(1, 1), 50);
    CHECK(oracle::rel_fro(model.A, A) < 1e-8);
    CHECK(model.fit_residual < 1e-12);
  }

  TEST_CASE("constant data: unit eigenvalue carries everything") {
    const Eigen::MatrixXd v = Eigen::MatrixXd::Constant(10, 1, 2.5);
    const auto model = fit(build_snapshots(frame_of(v)));
    CHECK(std::abs(model.A(0, 0) * 2.5 - 2.5) < 1e-14);
    CHECK(std::abs(model.lambdas(0) - 1.0) < 1e-14);
    CHECK(std::abs(model.omegas(0)) < 1e-13);
    const auto part = modal_participation(model, 0, model.training_samples);
    CHECK(part(0) == doctest::Approx(total(part)));
  }

  TEST_CASE("rotation: closed-form eigenvalues and frequencies") {
    const double th = std::numbers::pi / 8;
    const auto model = fit_trajectory(rotation(th), Eigen::Vector2d(1, 0.3), 40, 0.1);
    REQUIRE(model.modes() == 2);
    std::vector<cd> l{model.lambdas(0), model.lambdas(1)};
    std::sort(l.begin(), l.end(), [](cd a, cd b) { return a.imag() > b.imag(); });
    CHECK(std::abs(l[0] - cd(std::cos(th), std::sin(th))) < 1e-12);
    CHECK(std::abs(l[1] - cd(std::cos(th), -std::sin(th))) < 1e-12);
    for (Index j = 0; j < 2; ++j) {
      CHECK(std::abs(model.omegas(j).real()) < 1e-9);
      CHECK(std::abs(std::abs(model.omegas(j).imag()) - th / 0.1) < 1e-9);
    }
    CHECK(std::abs(th / 0.1 - 3.9269908169872414) < 1e-15);
  }

  TEST_CASE("amplitude examples") {
    const auto a = amplitudes(Eigen::Matrix2cd::Identity(), Eigen::Vector2d(3, -1));
    CHECK(std::abs(a.b(0) - 3.0) < 1e-15);
    CHECK(std::abs(a.b(1) + 1.0) < 1e-15);
    CHECK(amplitudes(Eigen::Matrix2cd::Identity(), Eigen::Vector2d::Zero()).b.norm() == 0.0);

    // unitary: conjugate-transpose product versus the least-squares solve
    oracle::Gen g(4);
    for (int t = 0; t < 10; ++t) {
      const Index n = g.integer(2, 12);
      Eigen::MatrixXcd z(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) z(i, j) = cd(g.normal(), g.normal());
      const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
      const Eigen::VectorXd x0 = g.vector(n);
      const auto sol = amplitudes(U, x0);
      CHECK((sol.b - U.adjoint() * x0.cast<cd>()).norm() < 1e-12 * x0.norm());
      CHECK(sol.residual < 1e-12);
    }
  }

  TEST_CASE("singular mode matrix falls back to minimum norm with a warning") {
    Eigen::Matrix2cd P;
    P << 1, 1, 0, 0;
    const auto sol = amplitudes(P, Eigen::Vector2d(2, 0));
    CHECK(std::abs(sol.b(0) - 1.0) < 1e-12);
    CHECK(std::abs(sol.b(1) - 1.0) < 1e-12);
    CHECK(!sol.warnings.empty());
  }

  TEST_CASE("reconstruction examples") {
    const double th = std::numbers::pi / 8;
    const Eigen::Vector2d x0(1, 0.3);
    const auto model = fit_trajectory(rotation(th), x0, 40, 0.1);
    const auto r0 = reconstruct(model, 0, 1);
    CHECK((r0.frame.values().row(0).transpose() - x0).norm() < 1e-8);
    const auto r4 = reconstruct(model, 4, 1);
    const Eigen::Vector2d want = rotation(th) * rotation(th) * rotation(th) * rotation(th) * x0;
    CHECK((r4.frame.values().row(0).transpose() - want).norm() < 1e-8);
    CHECK(r4.frame.t0() == doctest::Approx(0.4));
  }

  TEST_CASE("exactly linear data reconstructs over the training window") {
    oracle::Gen g(8);
    const auto sys = oracle::stable_system(g, 6);
    const Eigen::VectorXd x0 = g.vector(6);
    const Eigen::MatrixXd traj = oracle::iterate(sys.A, x0, 40);
    const auto model = fit(build_snapshots(frame_of(traj)));
    const auto r = reconstruct(model, 0, 40);
    CHECK((r.frame.values() - traj).norm() < 1e-6 * traj.norm());
  }

  TEST_CASE("decaying scalar mode") {
    Eigen::MatrixXd v(10, 1);
    for (Index k = 0; k < 10; ++k) v(k, 0) = 3.0 * std::pow(0.5, double(k));
    const auto model = fit(build_snapshots(frame_of(v)));
    const auto f = forecast(model, 15, 10);
    for (Index k = 0; k < 15; ++k) CHECK(std::abs(f.frame.values()(k, 0) - 3.0 * std::pow(0.5, double(10 + k))) < 1e-10);
    CHECK(f.frame.t0() == 10.0);
    CHECK_THROWS_AS(forecast(model, 0, 10), ValidationError);
  }

  TEST_CASE("neutral spectrum stays bounded by the amplitude sum") {
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A.topLeftCorner<2, 2>() = rotation(0.3);
    A.bottomRightCorner<2, 2>() = rotation(1.1);
    const auto model = fit_trajectory(A, Eigen::Vector4d(1, -2, 0.5, 0.7), 30);
    const double bound = model.b.cwiseAbs().sum();
    const auto f = forecast(model, 2000, 30);
    for (Index k = 0; k < 2000; ++k) CHECK(f.frame.values().row(k).norm() <= bound * (1 + 1e-9));
  }

  TEST_CASE("property: forecast equals iterated map") {
    oracle::Gen g(12);
    for (int t = 0; t < 20; ++t) {
      const Index n = g.integer(2, 12);
      const auto sys = oracle::stable_system(g, n, 1.0, 0.7);
      const Eigen::VectorXd x0 = g.vector(n);
      const Index m = 3 * n + 10;
      const auto model = fit_trajectory(sys.A, x0, m);
      REQUIRE(model.eigenvector_condition < 1e8);
      const Eigen::MatrixXd truth = oracle::iterate(sys.A, x0, m + 100).bottomRows(100);
      const auto f = forecast(model, 100, m);
      CHECK((f.frame.values() - truth).norm() < 1e-6 * truth.norm());
      CHECK(f.max_imag < 1e-8 * f.frame.values().cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("property: exact recovery and eigenpair residuals") {
    oracle::Gen g(99);
    for (int t = 0; t < 30; ++t) {
      const Index n = g.integer(2, 20);
      const auto sys = oracle::stable_system(g, n, 1.0);
      const auto model = fit_trajectory(sys.A, g.vector(n), 3 * n + 10);
      CHECK(oracle::rel_fro(model.A, sys.A) < 1e-8);
      const double anorm = model.A.norm();
      for (Index j = 0; j < n; ++j) {
        CHECK((model.A.cast<cd>() * model.Phi.col(j) - model.lambdas(j) * model.Phi.col(j)).norm() < 1e-8 * anorm);
        CHECK(std::abs(model.Phi.col(j).norm() - 1.0) < 1e-12);
        CHECK(std::abs(model.omegas(j).imag()) <= std::numbers::pi / model.dt);
      }
      // conjugate closure: every eigenvalue's conjugate is present
      for (Index j = 0; j < n; ++j) {
        double best = 1e300;
        for (Index k = 0; k < n; ++k) best = std::min(best, std::abs(model.lambdas(k) - std::conj(model.lambdas(j))));
        CHECK(best < 1e-10);
      }
      // and matches the constructed spectrum
      for (const auto& lam : sys.eigenvalues) {
        double best = 1e300;
        for (Index k = 0; k < n; ++k) best = std::min(best, std::abs(model.lambdas(k) - lam));
        CHECK(best < 1e-7);
      }
    }
  }

  TEST_CASE("property: least-squares optimality under random perturbations") {
    oracle::Gen g(31);
    const Index n = 5;
    const Eigen::MatrixXd data = g.matrix(40, n);  // noise: no exact propagator
    const auto snap = build_snapshots(frame_of(data));
    const auto model = fit(snap);
    const double base = (snap.Xp - model.A * snap.X).norm();
    for (int t = 0; t < 200; ++t) {
      Eigen::MatrixXd E = g.matrix(n, n);
      E *= 1e-3 * model.A.norm() / E.norm();
      CHECK((snap.Xp - (model.A + E) * snap.X).norm() >= base);
    }
  }

  TEST_CASE("property: rescaling dt rescales omega only") {
    oracle::Gen g(41);
    for (int t = 0; t < 10; ++t) {
      const Index n = g.integer(2, 8);
      const auto sys = oracle::stable_system(g, n);
      const Eigen::MatrixXd traj = oracle::iterate(sys.A, g.vector(n), 3 * n + 10);
      const double s = g.uniform(0.1, 10);
      const auto a = fit(build_snapshots(frame_of(traj, 0.2)));
      const auto b = fit(build_snapshots(frame_of(traj, 0.2 * s)));
      CHECK(a.A == b.A);
      CHECK(a.lambdas == b.lambdas);
      CHECK(a.Phi == b.Phi);
      CHECK(a.b == b.b);
      CHECK((a.omegas - s * b.omegas).norm() < 1e-12 * a.omegas.norm());
    }
  }

  TEST_CASE("property: participation invariant under unit-phase rescaling of modes") {
    oracle::Gen g(51);
    for (int t = 0; t < 10; ++t) {
      const Index n = g.integer(2, 10);
      const auto sys = oracle::stable_system(g, n);
      auto model = fit_trajectory(sys.A, g.vector(n), 3 * n + 10);
      const auto before = modal_participation(model, 0, model.training_samples);
      for (Index j = 0; j < n; ++j) model.Phi.col(j) *= std::polar(1.0, g.uniform(0, 2 * std::numbers::pi));
      model.b = amplitudes(model.Phi, model.x0).b;
      const auto after = modal_participation(model, 0, model.training_samples);
      CHECK((after - before).norm() < 1e-9 * before.norm());
    }
  }

  TEST_CASE("participation examples") {
    DmdModel m;
    m.dt = 1.0;
    m.lambdas = Eigen::Vector2cd(cd(0, 1), cd(0, -1));
    m.omegas = Eigen::Vector2cd(cd(0, std::numbers::pi / 2), cd(0, -std::numbers::pi / 2));
    m.omega_usable = {true, true};
    m.b = Eigen::Vector2cd(cd(3, 4), cd(0, 0));
    m.Phi = Eigen::Matrix2cd::Identity();
    m.training_samples = 7;
    for (Index len : {1, 5, 50}) {
      const auto p = modal_participation(m, 0, len);
      CHECK(p(0) == doctest::Approx(25.0).epsilon(1e-14));
      CHECK(p(1) == 0.0);
    }

    // two neutral modes: ranking follows |b|^2, values from direct evaluation
    m.lambdas = Eigen::Vector2cd(std::polar(1.0, 0.4), std::polar(1.0, 1.3));
    m.omegas = Eigen::Vector2cd(cd(0, 0.4), cd(0, 1.3));
    m.b = Eigen::Vector2cd(cd(10, 1), cd(0.2, -0.1));
    const auto p = modal_participation(m, 0, 20);
    for (Index j = 0; j < 2; ++j) {
      double acc = 0;
      for (int i = 0; i < 20; ++i) acc += std::norm(m.b(j) * std::exp(m.omegas(j) * double(i)));
      CHECK(p(j) == doctest::Approx(acc / 20).epsilon(1e-13));
    }
    CHECK(p(0) > p(1));
  }

  TEST_CASE("mode components") {
    // phi = e_3
    DmdModel m;
    m.dt = 1.0;
    m.lambdas = Eigen::Vector4cd(0.9, 0.5, 0.3, 0.1);
    m.omegas = m.lambdas.array().log();
    m.omega_usable = {true, true, true, true};
    m.Phi = Eigen::Matrix4cd::Identity();
    m.Phi.col(0).swap(m.Phi.col(2));
    m.b = Eigen::Vector4cd(1, 0.1, 0.1, 0.1);
    m.training_samples = 5;
    m.channel_names = {"a", "b", "c", "d"};
    const auto top = mode_components(m, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0].magnitudes == Eigen::Vector4d(0, 0, 1, 0));
    CHECK_THROWS_AS(mode_components(m, 5), ValidationError);

    // complex pair grouped once, equal magnitudes
    oracle::Gen g(61);
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    A.topLeftCorner<2, 2>() = 0.95 * rotation(0.7);
    A(2, 2) = 0.5;
    const Eigen::Matrix3d V = Eigen::Matrix3d::Identity() + 0.3 * g.matrix(3, 3);
    const auto model = fit_trajectory(V * A * V.inverse(), Eigen::Vector3d(1, 2, 0.1), 30);
    const auto groups = mode_components(model, 2);
    REQUIRE(groups.size() == 2);
    const auto& pair = groups[0].members.size() == 2 ? groups[0] : groups[1];
    REQUIRE(pair.members.size() == 2);
    const Eigen::VectorXd m0 = model.Phi.col(pair.members[0]).cwiseAbs();
    const Eigen::VectorXd m1 = model.Phi.col(pair.members[1]).cwiseAbs();
    CHECK((m0 - m1).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("normalization: unit columns, largest component real-positive") {
    oracle::Gen g(71);
    Eigen::MatrixXcd P(4, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) P(i, j) = cd(g.normal(), g.normal());
    const auto N = normalize_modes(P);
    for (Index j = 0; j < 4; ++j) {
      CHECK(std::abs(N.col(j).norm() - 1.0) < 1e-14);
      Index k;
      N.col(j).cwiseAbs().maxCoeff(&k);
      CHECK(N(k, j).imag() == 0.0);
      CHECK(N(k, j).real() > 0.0);
    }
  }

  TEST_CASE("diagnostics: under-determined warning, defective propagator error") {
    oracle::Gen g(81);
    const auto wide = fit(build_snapshots(frame_of(g.matrix(5, 8))));
    CHECK(std::any_of(wide.warnings.begin(), wide.warnings.end(),
                      [](const std::string& w) { return w.find("under-determined") != std::string::npos; }));

    // Jordan block: a ramp x_k = (k, 1) is generated by [[1, 1], [0, 1]]
    Eigen::MatrixXd ramp(12, 2);
    for (Index k = 0; k < 12; ++k) ramp.row(k) << double(k), 1.0;
    CHECK_THROWS_AS(fit(build_snapshots(frame_of(ramp))), NumericalError);
  }

  TEST_CASE("zero eigenvalues: flagged unusable, excluded, harmless when unexcited") {
    // x_{k+1} = diag(0.9, 0) x_k, with x0 on the first axis
    Eigen::Matrix2d A;
    A << 0.9, 0, 0, 0;
    Eigen::MatrixXd v = oracle::iterate(A, Eigen::Vector2d(1, 0), 12);
    v.col(1).setZero();
    // keep the second channel informative so X is full rank but its dynamics nilpotent
    v(0, 1) = 1.0;
    const auto model = fit(build_snapshots(frame_of(v)));
    Index unusable = 0;
    for (bool u : model.omega_usable) unusable += u ? 0 : 1;
    CHECK(unusable == 1);
    // that mode is excited at t = 0, so reconstruction must refuse
    CHECK_THROWS_AS(reconstruct(model, 0, 5), NumericalError);

    const Eigen::MatrixXd quiet_traj = oracle::iterate(A, Eigen::Vector2d(1, 0), 12);
    const auto quiet = fit(build_snapshots(frame_of(quiet_traj)));
    REQUIRE(quiet.modes() == 2);
    CHECK(quiet.omega_usable[0]);
    CHECK(!quiet.omega_usable[1]);
    CHECK((reconstruct(quiet, 0, 12).frame.values() - quiet_traj).norm() < 1e-12);
  }
}
