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

#ifndef ANOMALY_HARNESS_RUN_CONFIG_H_
#define ANOMALY_HARNESS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "anomaly/complexity.h"
#include "anomaly/model_config.h"
#include "anomaly/scores.h"
#include "anomaly/vulnerability.h"

namespace anomaly::harness {

inline constexpr std::string_view kToolVersion = "0.3.0";
inline constexpr std::string_view kPixelConvention = "unit_float_clip01";

struct RunConfig {
  std::uint64_t global_seed = 0;
  ModelConfig model;
  TrajectoryConfig trajectory;
  AttackConfig attack;  // mask must be empty
  std::filesystem::path real_dir;
  std::filesystem::path generated_dir;
  std::filesystem::path output_dir = ".";
  KsCombine ks_combination = KsCombine::kAverage;
  int workers = 1;
  std::filesystem::path cache_dir;  // empty: no cache
};

// Stable digest of the measurement hyperparameters (epsilon, K, alpha,
// delta, J) and the pixel convention. The global seed and the model are
// recorded separately on every record.
std::string params_hash(const TrajectoryConfig& trajectory,
                        const AttackConfig& attack);
std::string params_hash(const RunConfig& cfg);

// Reads a run config JSON file. "model" may be an inline object or a path
// (relative paths resolve against the config file's directory).
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = ".");

enum class DatasetRole { kReal, kGenerated };

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_RUN_CONFIG_H_
