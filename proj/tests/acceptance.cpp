// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "dmdkit/app/commands.hpp"
#include "dmdkit/dmd.hpp"
#include "dmdkit/linalg.hpp"
#include "dmdkit/metrics.hpp"
#include "dmdkit/preprocess.hpp"
#include "dmdkit/synthetic.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace dmdkit;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

TimeSeriesFrame frame_of(const Eigen::MatrixXd& v, double dt = 1.0) {
  std::vector<std::string> names;
  for (Index i = 0; i < v.cols(); ++i) names.push_back("x" + std::to_string(i));
  return TimeSeriesFrame(names, 0.0, dt, v);
}

// Gaussian matrix rescaled to a random spectral radius in [0.8, 1].
Eigen::MatrixXd random_stable(oracle::Gen& g, Index n) {
  const Eigen::MatrixXd a = g.matrix(n, n);
  return a * (g.uniform(0.8, 1.0) / oracle::spectral_radius(a));
}

Verdict exact_recovery() {
  oracle::Gen g(1001);
  const auto t0 = Clock::now();
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + trial % 19;
    const Eigen::MatrixXd A = random_stable(g, n);
    const Eigen::MatrixXd traj = oracle::iterate(A, g.vector(n), 3 * n + 10);
    worst = std::max(worst, oracle::rel_fro(fit(build_snapshots(frame_of(traj))).A, A));
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-8 && elapsed < 10.0, fmt("worst relative error %.3g (< 1e-8), %.3f s (< 10 s)", worst, elapsed)};
}

Verdict rotation_spectrum() {
  const double th = std::numbers::pi / 8, dt = 0.1;
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const auto model = fit(build_snapshots(frame_of(oracle::iterate(R, Eigen::Vector2d(1, 0.5), 30), dt)));
  const double want = th / dt;  // 3.9269908...
  double worst = 0;
  double pos = 0, neg = 0;
  for (Index j = 0; j < 2; ++j) {
    const auto w = model.omegas(j);
    worst = std::max(worst, std::abs(w - std::complex<double>(0, w.imag() > 0 ? want : -want)));
    (w.imag() > 0 ? pos : neg) += 1;
  }
  return {worst < 1e-9 && pos == 1 && neg == 1, fmt("max |omega - (+/-)i %.10f| = %.3g (< 1e-9)", want, worst)};
}

Verdict penrose_suite() {
  oracle::Gen g(1003);
  double worst_ratio = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Index r = g.integer(1, 40), c = g.integer(1, 40);
    switch (trial % 4) {
      case 0: c = r; break;                        // square
      case 1: r = std::max(r, c + 1); break;       // tall
      case 2: c = std::max(c, r + 1); break;       // wide
      default: break;                              // rank-deficient below
    }
    Eigen::MatrixXd M;
    if (trial % 4 == 3) {
      const Index k = g.integer(1, static_cast<int>(std::max<Index>(1, std::min(r, c) - 1)));
      M = g.matrix(r, k) * g.matrix(k, c);
    } else {
      M = g.matrix(r, c);
    }
    worst_ratio = std::max(worst_ratio, oracle::penrose(M, pseudoinverse(M)).worst() / M.norm());
  }
  return {worst_ratio < 1e-8, fmt("worst residual / ||M|| = %.3g (< 1e-8) over 100 matrices", worst_ratio)};
}

Verdict forecast_equivalence() {
  oracle::Gen g(1004);
  double worst = 0, worst_cond = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = g.integer(2, 16);
    const auto sys = oracle::stable_system(g, n, 1.0, 0.7);
    const Eigen::VectorXd x0 = g.vector(n);
    const Index m = 3 * n + 10;
    const auto model = fit(build_snapshots(frame_of(oracle::iterate(sys.A, x0, m))));
    worst_cond = std::max(worst_cond, model.eigenvector_condition);
    const Eigen::MatrixXd truth = oracle::iterate(sys.A, x0, m + 100).bottomRows(100);
    worst = std::max(worst, (forecast(model, 100, m).frame.values() - truth).norm() / truth.norm());
  }
  return {worst < 1e-6 && worst_cond < 1e8,
          fmt("worst relative deviation %.3g (< 1e-6), worst eigenvector condition %.3g", worst, worst_cond)};
}

Verdict stencils() {
  oracle::Gen g(1005);
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int degree = trial % 5;
    const Index m = g.integer(5, 40);
    const double dt = 0.1;
    double c[5] = {0, 0, 0, 0, 0};
    for (int k = 0; k <= degree; ++k) c[k] = g.uniform(-1, 1);
    Eigen::MatrixXd v(m, 1);
    Eigen::VectorXd d1(m), d2(m);
    for (Index i = 0; i < m; ++i) {
      const double t = double(i) * dt;
      v(i, 0) = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4])));
      d1(i) = c[1] + t * (2 * c[2] + t * (3 * c[3] + t * 4 * c[4]));
      d2(i) = 2 * c[2] + t * (6 * c[3] + t * 12 * c[4]);
    }
    worst = std::max(worst, (differentiate(v, dt, 1).col(0) - d1).cwiseAbs().maxCoeff());
    worst = std::max(worst, (differentiate(v, dt, 2).col(0) - d2).cwiseAbs().maxCoeff());
  }
  auto interior_error = [](double h) {
    const Index m = Index(std::lround(6.0 / h)) + 1;
    Eigen::MatrixXd v(m, 1);
    for (Index i = 0; i < m; ++i) v(i, 0) = std::sin(double(i) * h);
    const Eigen::MatrixXd d = differentiate(v, h, 1);
    double w = 0;
    for (Index i = 2; i < m - 2; ++i) w = std::max(w, std::abs(d(i, 0) - std::cos(double(i) * h)));
    return w;
  };
  const double p = std::log2(interior_error(0.04) / interior_error(0.02));
  return {worst <= 1e-9 && p >= 3.5 && p <= 4.5,
          fmt("max polynomial error %.3g (<= 1e-9), convergence exponent %.3f (in [3.5, 4.5])", worst, p)};
}

Verdict nmse_anchors() {
  oracle::Gen g(1006);
  const Eigen::MatrixXd t = g.matrix(200, 5);
  Eigen::MatrixXd mean = t;
  for (Index c = 0; c < 5; ++c) mean.col(c).setConstant(t.col(c).mean());
  const double zero = nmse(frame_of(t), frame_of(t)).average;
  const auto r = nmse(frame_of(mean), frame_of(t));
  const double dev = (r.per_channel.array() - 1.0).abs().maxCoeff();
  return {zero == 0.0 && dev <= 1e-12, fmt("NMSE(truth, truth) = %.3g, max |NMSE(mean) - 1| = %.3g", zero, dev)};
}

Verdict interactive_speed() {
  std::string detail;
  bool pass = true;
  for (const char* preset : {"5415m-like", "kcs-like"}) {
    app::RunConfig c;
    c.preset = preset;
    const auto t0 = Clock::now();
    const auto r = app::fit_run(c);
    modal_table(r.bundle.model);
    mode_components(r.bundle.model, 2);
    const auto f = app::forecast_run(r.bundle, r.data, false);
    const double s = seconds_since(t0);
    pass = pass && s < 5.0;
    detail += std::string(preset) + " " + std::to_string(r.data.train.channels()) + "x" +
              std::to_string(r.data.train.samples() - 1) + " snapshots: " + fmt("%.3f s; ", s);
  }
  return {pass, detail + "limit 5 s each"};
}

Verdict surrogate_reproduction() {
  app::RunConfig a;
  a.preset = "5415m-like";
  const auto ra = app::fit_run(a);
  const auto rows = modal_table(ra.bundle.model);
  double total = 0;
  for (const auto& r : rows) total += r.participation;
  const auto top = mode_components(ra.bundle.model, 1).front();
  const double share = top.participation / total;
  const bool pass_a = top.members.size() == 2 && share >= 0.8;

  const auto fa = app::forecast_run(ra.bundle, ra.data, false);
  const Eigen::VectorXd periods = normalize_time(fa.report.horizon, ra.data.reference_period);
  double within = 0, beyond = 0;
  for (Index i = 0; i < periods.size(); ++i) {
    if (periods(i) <= 2.0) within = std::max(within, fa.report.cumulative(i));
    else beyond = std::max(beyond, fa.report.cumulative(i));
  }
  const bool pass_c = within < 0.1 && beyond > 0.1;

  app::RunConfig k;
  k.preset = "kcs-like";
  const auto rk = app::fit_run(k);
  const auto top_k = modal_table(rk.bundle.model).front();
  const double imag = top_k.omega_usable ? std::abs(top_k.omega.imag()) : std::numeric_limits<double>::infinity();
  const bool pass_b = imag < 1e-8;

  const double eps = *ra.data.config.nonlinearity;
  std::string detail = "(a) dominant pair share " + fmt("%.4f (>= 0.8); ", share) + "(b) kcs-like top mode |Im w| " +
                       fmt("%.3g (< 1e-8); ", imag) + "(c) eps " + fmt("%.4g: ", eps) +
                       fmt("max cumulative NMSE %.4f within 2 periods (< 0.1), %.4f beyond (> 0.1)", within, beyond);
  return {pass_a && pass_b && pass_c, detail};
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "dmdkit_acceptance_determinism";
  std::string detail;
  bool pass = true;
  std::size_t compared = 0;
  for (const auto& name : app::selftest_scenarios()) {
    fs::remove_all(dir);
    app::run_scenario(name, dir, 7);
    const auto first = snapshot_dir(dir);
    fs::remove_all(dir);
    app::run_scenario(name, dir, 7);
    const auto second = snapshot_dir(dir);
    if (first != second || first.empty()) {
      pass = false;
      detail += name + " differs; ";
    }
    compared += first.size();
  }
  fs::remove_all(dir);
  return {pass, detail + std::to_string(compared) + " artifacts compared byte-for-byte across two runs of " +
                    std::to_string(app::selftest_scenarios().size()) + " scenarios"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"exact propagator recovery", exact_recovery},
      {"spectral correctness", rotation_spectrum},
      {"Moore-Penrose property suite", penrose_suite},
      {"forecast oracle equivalence", forecast_equivalence},
      {"stencil exactness and order", stencils},
      {"NMSE anchors", nmse_anchors},
      {"interactive-speed fits", interactive_speed},
      {"qualitative surrogate reproduction", surrogate_reproduction},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
