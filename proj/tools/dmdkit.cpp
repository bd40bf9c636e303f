#include "dmdkit/app/commands.hpp"
#include "dmdkit/error.hpp"
#include "dmdkit/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace dmdkit;
using namespace dmdkit::app;

namespace {

// Flag values; only the flags actually given override the config file.
struct Overrides {
  std::string input, preset, time_column, normalization, output_dir, standardize, nmse_channels;
  std::vector<std::string> columns;
  double dt = 0, rcond = 0, reference_period = 0, nonlinearity = 0, noise = 0;
  int derivative_order = 0;
  long long train_len = 0, test_len = 0;
  std::uint64_t seed = 0;
  std::string config_path;
};

void add_data_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--input", o.input, "CSV file with one row per sample");
  cmd->add_option("--preset", o.preset, "synthetic preset (5415m-like, kcs-like)");
  cmd->add_option("--columns", o.columns, "channels to use, in order")->delimiter(',');
  cmd->add_option("--time-column", o.time_column, "CSV column holding sample times");
  cmd->add_option("--dt", o.dt, "sampling interval in seconds");
  cmd->add_option("--derivative-order", o.derivative_order, "0, 1 or 2");
  cmd->add_option("--train-len", o.train_len, "training samples");
  cmd->add_option("--test-len", o.test_len, "test samples");
  cmd->add_option("--rcond", o.rcond, "relative singular value cutoff of the pseudoinverse");
  cmd->add_option("--normalization", o.normalization, "NMSE normalizer: variance or unit");
  cmd->add_option("--reference-period", o.reference_period, "time unit of horizon axes, seconds");
  cmd->add_option("-o,--output-dir", o.output_dir, "directory for artifacts");
  cmd->add_option("--seed", o.seed, "random seed of the synthetic generator");
  cmd->add_option("--nonlinearity", o.nonlinearity, "preset cubic distortion amplitude");
  cmd->add_option("--noise", o.noise, "preset noise level, fraction of channel std");
  cmd->add_option("--standardize", o.standardize, "statistics window: full, train or none");
  cmd->add_option("--nmse-channels", o.nmse_channels, "channels scored: base or all");
}

RunConfig build_config(const CLI::App* cmd, const Overrides& o, std::optional<RunConfig> base = std::nullopt) {
  RunConfig c = o.config_path.empty() ? base.value_or(RunConfig{}) : load_config(o.config_path);
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--input")) {
    c.input = o.input;
    c.preset.reset();
    c.nonlinearity.reset();
    c.noise.reset();
  }
  if (given("--preset")) {
    c.preset = o.preset;
    c.input.reset();
    c.time_column.reset();
    c.dt.reset();
  }
  if (given("--columns")) c.columns = o.columns;
  if (given("--time-column")) c.time_column = o.time_column;
  if (given("--dt")) c.dt = o.dt;
  if (given("--derivative-order")) c.derivative_order = o.derivative_order;
  if (given("--train-len")) c.train_len = static_cast<Index>(o.train_len);
  if (given("--test-len")) c.test_len = static_cast<Index>(o.test_len);
  if (given("--rcond")) c.rcond = o.rcond;
  if (given("--normalization")) c.normalization = o.normalization;
  if (given("--reference-period")) c.reference_period = o.reference_period;
  if (given("--output-dir")) c.output_dir = o.output_dir;
  if (given("--seed")) c.seed = o.seed;
  if (given("--nonlinearity")) c.nonlinearity = o.nonlinearity;
  if (given("--noise")) c.noise = o.noise;
  if (given("--standardize")) c.standardize = o.standardize;
  if (given("--nmse-channels")) c.nmse_channels = o.nmse_channels;
  return c;
}

int run(int argc, char** argv) {
  CLI::App app{"dmdkit: exact dynamic mode decomposition of multichannel time series"};
  app.require_subcommand(1);

  Overrides fit_o, fc_o, ev_o, syn_o;
  std::string model_path, synth_output = "data.csv", selftest_dir = "dmdkit-selftest";
  bool inject_fc = false, inject_ev = false;
  std::vector<std::string> scenarios;
  std::uint64_t selftest_seed = 7;

  auto* fit_cmd = app.add_subcommand("fit", "fit a model and write model.json, modes.csv, spectrum.csv");
  add_data_flags(fit_cmd, fit_o);

  auto* fc_cmd = app.add_subcommand("forecast", "forecast the test window with a saved model");
  add_data_flags(fc_cmd, fc_o);
  fc_cmd->add_option("-m,--model", model_path, "model.json written by fit")->required()->check(CLI::ExistingFile);
  fc_cmd->add_flag("--inject-truth", inject_fc, "replace the prediction by the truth (pipeline check)");

  auto* ev_cmd = app.add_subcommand("evaluate", "fit, then forecast the test window");
  add_data_flags(ev_cmd, ev_o);
  ev_cmd->add_flag("--inject-truth", inject_ev, "replace the prediction by the truth (pipeline check)");

  auto* syn_cmd = app.add_subcommand("synth", "write a synthetic preset as CSV");
  add_data_flags(syn_cmd, syn_o);
  syn_cmd->add_option("--out", synth_output, "CSV file to write");

  auto* st_cmd = app.add_subcommand("selftest", "run built-in end-to-end scenarios");
  st_cmd->add_option("--scenario", scenarios, "scenario names (default: all)")->delimiter(',');
  st_cmd->add_option("-o,--output-dir", selftest_dir, "directory for scenario artifacts");
  st_cmd->add_option("--seed", selftest_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*fit_cmd) return cmd_fit(build_config(fit_cmd, fit_o), std::cout);
  if (*fc_cmd) {
    // without a config file the data source defaults to the one the model was fitted on
    std::optional<RunConfig> base;
    if (fc_o.config_path.empty()) base = config_from_json(load_bundle(model_path).config);
    return cmd_forecast(build_config(fc_cmd, fc_o, base), model_path, inject_fc, std::cout);
  }
  if (*ev_cmd) return cmd_evaluate(build_config(ev_cmd, ev_o), inject_ev, std::cout);
  if (*syn_cmd) return cmd_synth(build_config(syn_cmd, syn_o), synth_output, std::cout);
  if (*st_cmd) {
    if (scenarios.empty()) scenarios = selftest_scenarios();
    return cmd_selftest(scenarios, selftest_dir, selftest_seed, std::cout);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "dmdkit: error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "dmdkit: numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "dmdkit: error: " << e.what() << '\n';
    return 1;
  }
}
