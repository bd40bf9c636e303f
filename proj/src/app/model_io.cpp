#include "dmdkit/app/model_io.hpp"

#include "dmdkit/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace dmdkit::app {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "dmdkit-model";
constexpr int kVersion = 1;

json complex_json(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return nullptr;
  return json::array({z.real(), z.imag()});
}

Complex complex_from(const json& j) {
  if (j.is_null()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

json cvector_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Eigen::VectorXcd cvector_from(const json& j) {
  Eigen::VectorXcd v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = complex_from(j.at(static_cast<std::size_t>(i)));
  return v;
}

// Matrices are stored as arrays of rows.
json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

json cmatrix_json(const Eigen::MatrixXcd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(cvector_json(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd matrix_from(const json& j, Index rows, Index cols) {
  if (static_cast<Index>(j.size()) != rows) throw ValidationError("model file: matrix has the wrong row count");
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from(j.at(static_cast<std::size_t>(r)));
    if (row.size() != cols) throw ValidationError("model file: matrix has the wrong column count");
    m.row(r) = row.transpose();
  }
  return m;
}

Eigen::MatrixXcd cmatrix_from(const json& j, Index rows, Index cols) {
  if (static_cast<Index>(j.size()) != rows) throw ValidationError("model file: matrix has the wrong row count");
  Eigen::MatrixXcd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Eigen::VectorXcd row = cvector_from(j.at(static_cast<std::size_t>(r)));
    if (row.size() != cols) throw ValidationError("model file: matrix has the wrong column count");
    m.row(r) = row.transpose();
  }
  return m;
}

}  // namespace

json bundle_to_json(const ModelBundle& b) {
  const DmdModel& m = b.model;
  json model;
  model["channel_names"] = m.channel_names;
  model["dt"] = m.dt;
  model["t0"] = m.t0;
  model["training_samples"] = m.training_samples;
  model["A"] = matrix_json(m.A);
  model["lambdas"] = cvector_json(m.lambdas);
  model["omegas"] = cvector_json(m.omegas);
  model["omega_usable"] = m.omega_usable;
  model["Phi"] = cmatrix_json(m.Phi);
  model["b"] = cvector_json(m.b);
  model["x0"] = vector_json(m.x0);
  model["fit_residual"] = m.fit_residual;
  model["amplitude_residual"] = m.amplitude_residual;
  model["eigenvector_condition"] = m.eigenvector_condition;
  model["warnings"] = m.warnings;

  json pre;
  pre["base_channels"] = b.base_channels;
  pre["derivative_order"] = b.derivative_order;
  pre["channels"] = b.params.channels;
  pre["mean"] = vector_json(b.params.mean);
  pre["std"] = vector_json(b.params.std);

  json out;
  out["format"] = kFormat;
  out["version"] = kVersion;
  out["config"] = b.config;
  out["train_len"] = b.train_len;
  out["preprocessing"] = pre;
  out["model"] = model;
  return out;
}

ModelBundle bundle_from_json(const json& j) {
  try {
    if (j.at("format") != kFormat || j.at("version") != kVersion) {
      throw ValidationError("not a dmdkit model file (format/version mismatch)");
    }
    ModelBundle b;
    b.config = j.at("config");
    b.train_len = j.at("train_len").get<Index>();
    const json& pre = j.at("preprocessing");
    b.base_channels = pre.at("base_channels").get<std::vector<std::string>>();
    b.derivative_order = pre.at("derivative_order").get<int>();
    b.params.channels = pre.at("channels").get<std::vector<std::string>>();
    b.params.mean = vector_from(pre.at("mean"));
    b.params.std = vector_from(pre.at("std"));

    const json& mj = j.at("model");
    DmdModel& m = b.model;
    m.channel_names = mj.at("channel_names").get<std::vector<std::string>>();
    const auto n = static_cast<Index>(m.channel_names.size());
    m.dt = mj.at("dt").get<double>();
    m.t0 = mj.at("t0").get<double>();
    m.training_samples = mj.at("training_samples").get<Index>();
    m.A = matrix_from(mj.at("A"), n, n);
    m.lambdas = cvector_from(mj.at("lambdas"));
    m.omegas = cvector_from(mj.at("omegas"));
    m.omega_usable = mj.at("omega_usable").get<std::vector<bool>>();
    m.Phi = cmatrix_from(mj.at("Phi"), n, n);
    m.b = cvector_from(mj.at("b"));
    m.x0 = vector_from(mj.at("x0"));
    m.fit_residual = mj.at("fit_residual").get<double>();
    m.amplitude_residual = mj.at("amplitude_residual").get<double>();
    m.eigenvector_condition = mj.at("eigenvector_condition").get<double>();
    m.warnings = mj.at("warnings").get<std::vector<std::string>>();
    if (m.lambdas.size() != n || m.omegas.size() != n || m.b.size() != n || m.x0.size() != n ||
        static_cast<Index>(m.omega_usable.size()) != n || b.params.mean.size() != n || b.params.std.size() != n ||
        static_cast<Index>(b.params.channels.size()) != n) {
      throw ValidationError("model file: inconsistent dimensions");
    }
    if (!(m.dt > 0.0)) throw ValidationError("model file: dt must be positive");
    return b;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write model file '" + path.string() + "'");
  out << dump_json(bundle_to_json(bundle));
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return bundle_from_json(j);
}

}  // namespace dmdkit::app
