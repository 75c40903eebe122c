// Copyright 2026 The Anomaly Score Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anomaly/model_config.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "anomaly/errors.h"
#include "anomaly/external_model.h"

namespace anomaly {

using nlohmann::json;

ModelConfig parse_model_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("model config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("model config must be a JSON object");

  ModelConfig cfg;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "affine") {
      cfg.kind = ModelKind::kAffine;
    } else if (kind == "toy_nonlinear") {
      cfg.kind = ModelKind::kToyNonlinear;
    } else if (kind == "external_adapter") {
      cfg.kind = ModelKind::kExternalAdapter;
    } else {
      throw InputError("unknown model kind '" + kind + "'");
    }
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.feature_dim = j.value("feature_dim", cfg.feature_dim);
    if (j.contains("input_shape")) {
      const auto s = j["input_shape"].get<std::vector<int>>();
      if (s.size() != 3) throw InputError("input_shape must be [H, W, C]");
      cfg.input_shape = Shape{s[0], s[1], s[2]};
    }
    if (j.contains("toy_net")) {
      const json& t = j["toy_net"];
      cfg.toy_net.stage1_channels =
          t.value("stage1_channels", cfg.toy_net.stage1_channels);
      cfg.toy_net.stage2_channels =
          t.value("stage2_channels", cfg.toy_net.stage2_channels);
      cfg.toy_net.gain = t.value("gain", cfg.toy_net.gain);
      cfg.toy_net.edge_filters = t.value("edge_filters", cfg.toy_net.edge_filters);
    }
    if (cfg.kind == ModelKind::kExternalAdapter) {
      cfg.command = j.at("command").get<std::vector<std::string>>();
      if (cfg.command.empty()) throw InputError("adapter command is empty");
      if (j.contains("adapter")) cfg.adapter_json = j["adapter"].dump();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("model config: ") + e.what());
  }
  return cfg;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return with_context("model config " + path.string(),
                      [&] { return parse_model_config(ss.str()); });
}

std::string to_json(const ModelConfig& cfg) {
  json j;
  switch (cfg.kind) {
    case ModelKind::kAffine:
      j["kind"] = "affine";
      break;
    case ModelKind::kToyNonlinear:
      j["kind"] = "toy_nonlinear";
      j["toy_net"] = {{"stage1_channels", cfg.toy_net.stage1_channels},
                      {"stage2_channels", cfg.toy_net.stage2_channels},
                      {"gain", cfg.toy_net.gain},
                      {"edge_filters", cfg.toy_net.edge_filters}};
      break;
    case ModelKind::kExternalAdapter:
      j["kind"] = "external_adapter";
      j["command"] = cfg.command;
      if (!cfg.adapter_json.empty()) j["adapter"] = json::parse(cfg.adapter_json);
      break;
  }
  if (cfg.kind != ModelKind::kExternalAdapter) {
    j["seed"] = cfg.seed;
    j["feature_dim"] = cfg.feature_dim;
    j["input_shape"] = {cfg.input_shape.height, cfg.input_shape.width,
                        cfg.input_shape.channels};
  }
  return j.dump();
}

std::unique_ptr<FeatureModel> build_model(const ModelConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::kAffine:
      return make_toy_affine_model(cfg.seed, cfg.input_shape, cfg.feature_dim);
    case ModelKind::kToyNonlinear:
      return make_toy_nonlinear_model(cfg.seed, cfg.input_shape,
                                      cfg.feature_dim, cfg.toy_net);
    case ModelKind::kExternalAdapter:
      return std::make_unique<ExternalProcessModel>(cfg.command,
                                                    cfg.adapter_json);
  }
  throw InputError("unhandled model kind");
}

}  // namespace anomaly
