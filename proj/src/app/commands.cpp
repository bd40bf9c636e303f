#include "dmdkit/app/commands.hpp"

#include "dmdkit/app/reports.hpp"
#include "dmdkit/csv.hpp"
#include "dmdkit/error.hpp"
#include "dmdkit/synthetic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

namespace dmdkit::app {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "dmdkit: warning: " << w << '\n';
}

json named_values(const std::vector<std::string>& names, const Eigen::VectorXd& v) {
  json out = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = v(static_cast<Index>(i));
  return out;
}

json vector_array(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string csv_text(const std::function<void(std::ostream&)>& body) {
  std::ostringstream s;
  body(s);
  return s.str();
}

}  // namespace

FitOutcome fit_run(const RunConfig& config) {
  PreparedData data = prepare_data(config);
  ModelBundle bundle;
  bundle.model = fit(build_snapshots(data.train), FitOptions{data.config.rcond});
  bundle.params = data.params;
  bundle.derivative_order = data.config.derivative_order;
  bundle.base_channels = data.base_channels;
  bundle.train_len = *data.config.train_len;
  bundle.config = config_to_json(data.config);
  return {std::move(data), std::move(bundle)};
}

void write_fit_artifacts(const fs::path& dir, const ModelBundle& bundle) {
  ensure_dir(dir);
  save_bundle(dir / "model.json", bundle);
  write_text(dir / "modes.csv", csv_text([&](std::ostream& o) { write_modes_csv(o, bundle.model); }));
  write_text(dir / "spectrum.csv", csv_text([&](std::ostream& o) { write_spectrum_csv(o, bundle.model); }));
  write_text(dir / "components.csv", csv_text([&](std::ostream& o) { write_components_csv(o, bundle.model, 2); }));
}

PreparedData prepare_for_model(const RunConfig& config, const ModelBundle& bundle) {
  RunConfig c = config;
  c.derivative_order = bundle.derivative_order;
  c.train_len = bundle.train_len;
  PreparedData data = prepare_data(c, bundle.params);
  if (data.base_channels != bundle.base_channels) {
    throw ValidationError("model/data channel mismatch: the model was fitted on different base channels");
  }
  if (std::abs(data.train.dt() - bundle.model.dt) > 1e-9 * bundle.model.dt) {
    throw ValidationError("model/data sampling mismatch: data dt differs from the model dt");
  }
  return data;
}

ForecastOutcome forecast_run(const ModelBundle& bundle, const PreparedData& data, bool inject_truth) {
  const DmdModel& model = bundle.model;
  if (model.channel_names != data.test.channel_names()) {
    throw ValidationError("model/data channel mismatch: model channels differ from the prepared data channels");
  }
  const Index horizon = data.test.samples();
  double max_imag = 0.0;
  TimeSeriesFrame prediction = data.test;
  if (!inject_truth) {
    auto rec = forecast(model, horizon, bundle.train_len);
    // the modal expansion runs on the model's own clock; report it on the data grid
    prediction = TimeSeriesFrame(rec.frame.channel_names(), data.test.t0(), data.test.dt(), rec.frame.values());
    max_imag = rec.max_imag;
  }

  const auto& cfg = data.config;
  const std::vector<std::string> scored =
      cfg.nmse_channels == "base" ? data.base_channels : data.test.channel_names();
  ErrorReport report = nmse(prediction.select_channels(scored), data.test.select_channels(scored),
                            parse_normalization(cfg.normalization));

  json r;
  r["config"] = config_to_json(cfg);
  r["model"] = {{"channels", model.channel_names},
                {"fit_residual", model.fit_residual},
                {"amplitude_residual", model.amplitude_residual},
                {"eigenvector_condition", model.eigenvector_condition},
                {"warnings", model.warnings}};
  r["truth_injected"] = inject_truth;
  r["normalization"] = to_string(report.normalization);
  r["normalizer"] = named_values(report.channels, report.normalizer);
  r["nmse_channels"] = report.channels;
  r["per_channel_nmse"] = named_values(report.channels, report.per_channel);
  r["average_nmse"] = report.average;
  r["reference_period"] = data.reference_period;
  r["horizon_s"] = vector_array(report.horizon);
  r["horizon_periods"] = vector_array(normalize_time(report.horizon, data.reference_period));
  r["cumulative_nmse"] = vector_array(report.cumulative);
  r["step_nmse"] = vector_array(report.per_step);
  r["max_imag"] = max_imag;
  return {std::move(prediction), data.test, std::move(report), max_imag, std::move(r)};
}

void write_forecast_artifacts(const fs::path& dir, const ModelBundle& bundle, const PreparedData& data,
                              const ForecastOutcome& outcome) {
  ensure_dir(dir);
  const double period = data.reference_period;
  const TimeSeriesFrame prediction = destandardize(outcome.prediction, bundle.params);
  const TimeSeriesFrame truth = destandardize(outcome.truth, bundle.params);
  const TimeSeriesFrame train = data.augmented.slice_rows(0, bundle.train_len);

  write_text(dir / "forecast.csv", csv_text([&](std::ostream& o) { write_csv(o, prediction); }));
  write_text(dir / "timeseries.csv", csv_text([&](std::ostream& o) {
               o << "time,periods,channel,value,series\n";
               write_series_long(o, train, "train", period);
               write_series_long(o, truth, "truth", period);
               write_series_long(o, prediction, "prediction", period);
             }));
  write_text(dir / "error_trace.csv",
             csv_text([&](std::ostream& o) { write_error_trace_csv(o, outcome.report, period); }));
  write_text(dir / "report.json", dump_json(outcome.report_json));
}

int cmd_fit(const RunConfig& config, std::ostream& out) {
  FitOutcome r = fit_run(config);
  emit_warnings(r.bundle.model.warnings);
  const fs::path dir = r.data.config.output_dir;
  write_fit_artifacts(dir, r.bundle);
  out << "fitted " << r.bundle.model.modes() << " modes on " << r.data.train.samples()
      << " training samples (fit residual " << r.bundle.model.fit_residual << "); wrote " << (dir / "model.json").string()
      << '\n';
  return 0;
}

int cmd_forecast(const RunConfig& config, const fs::path& model_path, bool inject_truth, std::ostream& out) {
  const ModelBundle bundle = load_bundle(model_path);
  const PreparedData data = prepare_for_model(config, bundle);
  const ForecastOutcome f = forecast_run(bundle, data, inject_truth);
  const fs::path dir = data.config.output_dir;
  write_forecast_artifacts(dir, bundle, data, f);
  out << "forecast " << data.test.samples() << " steps; average NMSE " << f.report.average << "; wrote "
      << (dir / "report.json").string() << '\n';
  return 0;
}

int cmd_evaluate(const RunConfig& config, bool inject_truth, std::ostream& out) {
  FitOutcome r = fit_run(config);
  emit_warnings(r.bundle.model.warnings);
  const fs::path dir = r.data.config.output_dir;
  write_fit_artifacts(dir, r.bundle);
  const ForecastOutcome f = forecast_run(r.bundle, r.data, inject_truth);
  write_forecast_artifacts(dir, r.bundle, r.data, f);
  out << "fitted " << r.bundle.model.modes() << " modes, forecast " << r.data.test.samples()
      << " steps; average NMSE " << f.report.average << "; artifacts in " << dir.string() << '\n';
  return 0;
}

int cmd_synth(const RunConfig& config, const fs::path& output, std::ostream& out) {
  if (!config.preset) throw ValidationError("synth needs a preset");
  RunConfig c = config;
  c.derivative_order = 0;
  c.standardize = "none";
  const PreparedData data = prepare_data(c);
  if (output.has_parent_path()) ensure_dir(output.parent_path());
  write_csv(output, data.raw, "t");
  out << "wrote " << data.raw.samples() << " x " << data.raw.channels() << " samples of '" << *c.preset << "' to "
      << output.string() << '\n';
  return 0;
}

// self-test scenarios

bool ScenarioResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const std::vector<std::string>& selftest_scenarios() {
  static const std::vector<std::string> names{"linear", "identity", "5415m-like", "kcs-like"};
  return names;
}

namespace {

Check make_check(std::string name, double value, std::string relation, double threshold) {
  bool pass = false;
  if (relation == "<") pass = value < threshold;
  if (relation == "<=") pass = value <= threshold;
  if (relation == ">") pass = value > threshold;
  if (relation == ">=") pass = value >= threshold;
  return {std::move(name), value, std::move(relation), threshold, pass};
}

Eigen::MatrixXd random_stable(Index n, double radius, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  const double rho = Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues().cwiseAbs().maxCoeff();
  return a * (radius / rho);
}

struct Evaluation {
  FitOutcome fit;
  ForecastOutcome forecast;
};

Evaluation evaluate_into(const RunConfig& config, const fs::path& dir) {
  FitOutcome r = fit_run(config);
  write_fit_artifacts(dir, r.bundle);
  ForecastOutcome f = forecast_run(r.bundle, r.data, false);
  write_forecast_artifacts(dir, r.bundle, r.data, f);
  return {std::move(r), std::move(f)};
}

std::vector<Check> linear_scenario(const fs::path& dir, std::uint64_t seed) {
  Rng rng(seed);
  LinearSystemSpec spec;
  spec.A_true = random_stable(6, 0.98, rng);
  spec.x0.resize(6);
  for (Index i = 0; i < 6; ++i) spec.x0(i) = rng.normal();
  spec.steps = 60;
  spec.dt = 0.1;
  const TimeSeriesFrame data = gen_linear(spec);
  write_csv(dir / "data.csv", data, "t");

  RunConfig c;
  c.input = (dir / "data.csv").string();
  c.time_column = "t";
  c.derivative_order = 0;
  c.standardize = "none";
  c.train_len = 40;
  c.test_len = 20;
  c.output_dir = dir.string();
  const Evaluation e = evaluate_into(c, dir);
  const double a_err = (e.fit.bundle.model.A - spec.A_true).norm() / spec.A_true.norm();
  return {make_check("propagator_relative_error", a_err, "<", 1e-8),
          make_check("average_nmse", e.forecast.report.average, "<", 1e-6)};
}

std::vector<Check> identity_scenario(const fs::path& dir) {
  const TimeSeriesFrame data({"level"}, 0.0, 0.5, Eigen::MatrixXd::Constant(20, 1, 1.5));
  write_csv(dir / "data.csv", data, "t");
  RunConfig c;
  c.input = (dir / "data.csv").string();
  c.time_column = "t";
  c.derivative_order = 0;
  c.standardize = "none";
  c.normalization = "unit";
  c.train_len = 12;
  c.test_len = 8;
  c.output_dir = dir.string();
  const Evaluation e = evaluate_into(c, dir);
  double worst = 0.0;
  for (Index j = 0; j < e.fit.bundle.model.modes(); ++j) {
    worst = std::max(worst, std::abs(e.fit.bundle.model.lambdas(j) - Complex(1.0, 0.0)));
  }
  return {make_check("max_abs_lambda_minus_one", worst, "<", 1e-12),
          make_check("average_nmse", e.forecast.report.average, "<", 1e-20)};
}

double participation_total(const std::vector<ModalRow>& rows) {
  double total = 0.0;
  for (const auto& r : rows) total += r.participation;
  return total;
}

std::vector<Check> preset_5415m(const fs::path& dir, std::uint64_t seed) {
  RunConfig c;
  c.preset = "5415m-like";
  c.seed = seed;
  c.output_dir = dir.string();
  const Evaluation e = evaluate_into(c, dir);
  const auto& model = e.fit.bundle.model;
  const double total = participation_total(modal_table(model));
  const auto top = mode_components(model, 1).front();

  const Eigen::VectorXd periods = normalize_time(e.forecast.report.horizon, e.fit.data.reference_period);
  const Eigen::VectorXd& cum = e.forecast.report.cumulative;
  double within = 0.0;
  double beyond = 0.0;
  for (Index i = 0; i < cum.size(); ++i) {
    if (periods(i) <= 2.0) within = std::max(within, cum(i));
    else beyond = std::max(beyond, cum(i));
  }
  return {make_check("dominant_pair_members", static_cast<double>(top.members.size()), ">=", 2.0),
          make_check("dominant_pair_share", top.participation / total, ">=", 0.8),
          make_check("max_cumulative_nmse_within_2_periods", within, "<", 0.1),
          make_check("max_cumulative_nmse_beyond_2_periods", beyond, ">", 0.1)};
}

std::vector<Check> preset_kcs(const fs::path& dir, std::uint64_t seed) {
  RunConfig c;
  c.preset = "kcs-like";
  c.seed = seed;
  c.output_dir = dir.string();
  const Evaluation e = evaluate_into(c, dir);
  const auto rows = modal_table(e.fit.bundle.model);
  const auto& top = rows.front();
  const double top_freq = top.omega_usable ? std::abs(top.omega.imag()) : std::numeric_limits<double>::infinity();
  return {make_check("top_mode_abs_imag_omega", top_freq, "<", 1e-8),
          make_check("top_mode_share", top.participation / participation_total(rows), ">", 0.0)};
}

}  // namespace

ScenarioResult run_scenario(const std::string& name, const fs::path& dir, std::uint64_t seed) {
  ensure_dir(dir);
  ScenarioResult result{name, {}};
  if (name == "linear") {
    result.checks = linear_scenario(dir, seed);
  } else if (name == "identity") {
    result.checks = identity_scenario(dir);
  } else if (name == "5415m-like") {
    result.checks = preset_5415m(dir, seed);
  } else if (name == "kcs-like") {
    result.checks = preset_kcs(dir, seed);
  } else {
    throw ValidationError("unknown selftest scenario '" + name + "'");
  }
  json checks = json::array();
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"threshold", c.threshold},
                      {"pass", c.pass}});
  }
  write_text(dir / "checks.json",
             dump_json({{"scenario", name}, {"seed", seed}, {"pass", result.pass()}, {"checks", checks}}));
  return result;
}

int cmd_selftest(const std::vector<std::string>& names, const fs::path& out_dir, std::uint64_t seed,
                 std::ostream& out) {
  bool all = true;
  for (const auto& name : names) {
    const ScenarioResult r = run_scenario(name, out_dir / name, seed);
    for (const auto& c : r.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << name << ": " << c.name << " = " << c.value << ' ' << c.relation << ' '
          << c.threshold << '\n';
    }
    all = all && r.pass();
  }
  return all ? 0 : 1;
}

}  // namespace dmdkit::app
