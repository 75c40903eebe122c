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

#ifndef ANOMALY_MODEL_CONFIG_H_
#define ANOMALY_MODEL_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "anomaly/feature_model.h"
#include "anomaly/toy_models.h"

namespace anomaly {

enum class ModelKind { kAffine, kToyNonlinear, kExternalAdapter };

// Parsed model config file, e.g.
//   {"kind": "toy_nonlinear", "seed": 7, "feature_dim": 16,
//    "input_shape": [16, 16, 3]}
//   {"kind": "external_adapter", "command": ["python3", "adapter.py"],
//    "adapter": {"backbone": "dinov2_vits14", "tap": "cls"}}
struct ModelConfig {
  ModelKind kind = ModelKind::kToyNonlinear;
  std::uint64_t seed = 0;
  std::size_t feature_dim = 16;
  Shape input_shape{16, 16, 3};
  ToyNetOptions toy_net;
  std::vector<std::string> command;  // external_adapter only
  std::string adapter_json;          // external_adapter only, raw JSON object
};

ModelConfig parse_model_config(std::string_view json_text);
ModelConfig load_model_config(const std::filesystem::path& path);
std::string to_json(const ModelConfig& cfg);

std::unique_ptr<FeatureModel> build_model(const ModelConfig& cfg);

}  // namespace anomaly

#endif  // ANOMALY_MODEL_CONFIG_H_
