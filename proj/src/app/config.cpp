#include "dmdkit/app/config.hpp"

#include "dmdkit/error.hpp"

#include <fstream>
#include <set>

namespace dmdkit::app {
namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config field '") + key + "' has the wrong type");
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  out = get_field<T>(j, key);
}

template <typename T>
void read_value(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = get_field<T>(j, key);
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known{
      "input",  "preset",     "columns", "time_column", "dt",           "derivative_order", "train_len",
      "test_len", "rcond",    "normalization", "reference_period", "output_dir", "seed", "nonlinearity",
      "noise",  "standardize", "nmse_channels"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ValidationError("unknown config field '" + item.key() + "'");
  }
  RunConfig c;
  read_optional(j, "input", c.input);
  read_optional(j, "preset", c.preset);
  read_value(j, "columns", c.columns);
  read_optional(j, "time_column", c.time_column);
  read_optional(j, "dt", c.dt);
  read_value(j, "derivative_order", c.derivative_order);
  read_optional(j, "train_len", c.train_len);
  read_optional(j, "test_len", c.test_len);
  read_value(j, "rcond", c.rcond);
  read_value(j, "normalization", c.normalization);
  read_optional(j, "reference_period", c.reference_period);
  read_value(j, "output_dir", c.output_dir);
  read_optional(j, "seed", c.seed);
  read_optional(j, "nonlinearity", c.nonlinearity);
  read_optional(j, "noise", c.noise);
  read_value(j, "standardize", c.standardize);
  read_value(j, "nmse_channels", c.nmse_channels);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["input"] = optional_json(c.input);
  j["preset"] = optional_json(c.preset);
  j["columns"] = c.columns;
  j["time_column"] = optional_json(c.time_column);
  j["dt"] = optional_json(c.dt);
  j["derivative_order"] = c.derivative_order;
  j["train_len"] = optional_json(c.train_len);
  j["test_len"] = optional_json(c.test_len);
  j["rcond"] = c.rcond;
  j["normalization"] = c.normalization;
  j["reference_period"] = optional_json(c.reference_period);
  j["output_dir"] = c.output_dir;
  j["seed"] = optional_json(c.seed);
  j["nonlinearity"] = optional_json(c.nonlinearity);
  j["noise"] = optional_json(c.noise);
  j["standardize"] = c.standardize;
  j["nmse_channels"] = c.nmse_channels;
  return j;
}

void validate_config(const RunConfig& c) {
  if (c.input.has_value() == c.preset.has_value()) {
    throw ValidationError("exactly one of 'input' and 'preset' must be given");
  }
  if (c.input && (c.nonlinearity || c.noise)) {
    throw ValidationError("'nonlinearity' and 'noise' only apply to a preset");
  }
  if (c.derivative_order < 0 || c.derivative_order > 2) throw ValidationError("'derivative_order' must be 0, 1 or 2");
  if (c.train_len && *c.train_len < 3) throw ValidationError("'train_len' must be at least 3");
  if (c.test_len && *c.test_len < 1) throw ValidationError("'test_len' must be at least 1");
  if (!(c.rcond >= 0.0 && c.rcond < 1.0)) throw ValidationError("'rcond' must lie in [0, 1)");
  if (c.normalization != "variance" && c.normalization != "unit") {
    throw ValidationError("'normalization' must be \"variance\" or \"unit\"");
  }
  if (c.reference_period && !(*c.reference_period > 0.0)) throw ValidationError("'reference_period' must be positive");
  if (c.dt && !(*c.dt > 0.0)) throw ValidationError("'dt' must be positive");
  if (c.standardize != "full" && c.standardize != "train" && c.standardize != "none") {
    throw ValidationError("'standardize' must be \"full\", \"train\" or \"none\"");
  }
  if (c.nmse_channels != "base" && c.nmse_channels != "all") {
    throw ValidationError("'nmse_channels' must be \"base\" or \"all\"");
  }
  if (c.noise && !(*c.noise >= 0.0)) throw ValidationError("'noise' must be non-negative");
  if (c.output_dir.empty()) throw ValidationError("'output_dir' must not be empty");
}

}  // namespace dmdkit::app
