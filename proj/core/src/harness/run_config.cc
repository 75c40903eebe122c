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

#include "anomaly/harness/run_config.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "anomaly/errors.h"
#include "anomaly/hashing.h"

namespace anomaly::harness {

using nlohmann::json;
namespace fs = std::filesystem;

std::string params_hash(const TrajectoryConfig& trajectory,
                        const AttackConfig& attack) {
  std::string canonical = "anomaly-params-v1";
  canonical += "|pixels=" + std::string(kPixelConvention);
  canonical += "|epsilon=" + format_double(trajectory.epsilon);
  canonical += "|K=" + std::to_string(trajectory.steps);
  canonical += "|alpha=" + format_double(attack.alpha);
  canonical += "|delta=" + format_double(attack.delta);
  canonical += "|J=" + std::to_string(attack.steps);
  return sha256_hex(canonical).substr(0, 16);
}

std::string params_hash(const RunConfig& cfg) {
  return params_hash(cfg.trajectory, cfg.attack);
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("run config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("run config must be a JSON object");
  RunConfig cfg;
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    cfg.global_seed = j.value("global_seed", std::uint64_t{0});
    if (j.contains("model")) {
      const json& m = j["model"];
      cfg.model = m.is_string() ? load_model_config(resolve(m.get<std::string>()))
                                : parse_model_config(m.dump());
    }
    if (j.contains("trajectory")) {
      const json& t = j["trajectory"];
      cfg.trajectory.epsilon = t.value("epsilon", cfg.trajectory.epsilon);
      cfg.trajectory.steps = t.value("K", cfg.trajectory.steps);
    }
    if (j.contains("attack")) {
      const json& a = j["attack"];
      cfg.attack.alpha = a.value("alpha", cfg.attack.alpha);
      cfg.attack.delta = a.value("delta", cfg.attack.delta);
      cfg.attack.steps = a.value("J", cfg.attack.steps);
    }
    if (j.contains("real")) cfg.real_dir = resolve(j["real"].get<std::string>());
    if (j.contains("generated")) {
      cfg.generated_dir = resolve(j["generated"].get<std::string>());
    }
    if (j.contains("output")) cfg.output_dir = resolve(j["output"].get<std::string>());
    if (j.contains("cache_dir")) cfg.cache_dir = resolve(j["cache_dir"].get<std::string>());
    cfg.ks_combination = parse_ks_combine(j.value("ks_combination", std::string("average")));
    cfg.workers = j.value("workers", 1);
  } catch (const json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  cfg.trajectory.validate();
  if (cfg.workers < 1) throw InputError("run config: workers must be >= 1");
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read run config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return with_context("run config " + path.string(), [&] {
    return parse_run_config(ss.str(), path.parent_path());
  });
}

}  // namespace anomaly::harness
