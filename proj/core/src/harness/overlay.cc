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

#include "anomaly/harness/overlay.h"

#include <fstream>
#include <nlohmann/json.hpp>

#include "anomaly/errors.h"
#include "anomaly/harness/image_io.h"
#include "anomaly/harness/run_config.h"

namespace anomaly::harness {

using nlohmann::json;

std::string attribution_sidecar_json(const AttributionMap& map, const Segmentation& seg,
                                     const AttackConfig& cfg, const std::string& model_id,
                                     int min_sel, int max_sel) {
  json design = json::array();
  for (const auto& row : map.design) {
    json r = json::array();
    for (const auto v : row) r.push_back(static_cast<int>(v));
    design.push_back(std::move(r));
  }
  const json j{{"format", "anomaly-attribution"},
               {"tool_version", std::string(kToolVersion)},
               {"model_id", model_id},
               {"segments", seg.count},
               {"height", seg.height},
               {"width", seg.width},
               {"labels", seg.labels},
               {"trials", map.trials},
               {"min_sel", min_sel},
               {"max_sel", max_sel},
               {"attack", {{"alpha", cfg.alpha}, {"delta", cfg.delta}, {"J", cfg.steps}}},
               {"response", "masked_attack_vulnerability"},
               {"coefficients", map.coefficients},
               {"intercept", map.intercept},
               {"rank", map.rank},
               {"degenerate_fit", map.degenerate_fit},
               {"underdetermined", map.underdetermined},
               {"design", design},
               {"responses", map.responses},
               {"seed_material", map.seed_material}};
  return j.dump(2) + "\n";
}

void write_attribution(const std::filesystem::path& out_dir, const std::string& stem,
                       const ImageTensor& x, const Segmentation& seg,
                       const AttributionMap& map, const AttackConfig& cfg,
                       const std::string& model_id, int min_sel, int max_sel) {
  std::filesystem::create_directories(out_dir);
  json side = json::parse(attribution_sidecar_json(map, seg, cfg, model_id, min_sel, max_sel));
  side["image_id"] = x.id();
  const auto json_path = out_dir / (stem + ".attribution.json");
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw InputError("cannot write " + json_path.string());
  out << side.dump(2) << '\n';
  write_png(out_dir / (stem + ".overlay.png"), render_contributions(x, seg, map.coefficients));
}

}  // namespace anomaly::harness
