#pragma once

#include "dmdkit/dmd.hpp"
#include "dmdkit/preprocess.hpp"

#include <json.hpp>

#include <filesystem>

namespace dmdkit::app {

/// A fitted model plus what is needed to feed it new data: the
/// preprocessing that produced its channels and the run configuration.
struct ModelBundle {
  DmdModel model;
  StandardizationParams params;
  int derivative_order = 2;
  std::vector<std::string> base_channels;
  Index train_len = 0;
  nlohmann::json config;  // effective configuration of the fitting run
};

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_bundle(const std::filesystem::path& path);

/// Serialized text of a JSON document: two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace dmdkit::app
