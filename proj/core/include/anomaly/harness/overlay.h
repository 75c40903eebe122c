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

#ifndef ANOMALY_HARNESS_OVERLAY_H_
#define ANOMALY_HARNESS_OVERLAY_H_

#include <filesystem>
#include <string>

#include "anomaly/attribution.h"
#include "anomaly/vulnerability.h"

namespace anomaly::harness {

std::string attribution_sidecar_json(const AttributionMap& map, const Segmentation& seg,
                                     const AttackConfig& cfg, const std::string& model_id,
                                     int min_sel, int max_sel);

// Writes <stem>.attribution.json and <stem>.overlay.png into out_dir.
void write_attribution(const std::filesystem::path& out_dir, const std::string& stem,
                       const ImageTensor& x, const Segmentation& seg,
                       const AttributionMap& map, const AttackConfig& cfg,
                       const std::string& model_id, int min_sel, int max_sel);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_OVERLAY_H_
