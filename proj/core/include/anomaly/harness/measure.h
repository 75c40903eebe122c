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

#ifndef ANOMALY_HARNESS_MEASURE_H_
#define ANOMALY_HARNESS_MEASURE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "anomaly/feature_model.h"
#include "anomaly/harness/dataset.h"
#include "anomaly/harness/measure_file.h"
#include "anomaly/harness/run_config.h"

namespace anomaly::harness {

// Environment variable naming the on-disk record cache directory.
inline constexpr const char* kCacheDirEnv = "ANOMALY_CACHE_DIR";

struct MeasureStats {
  std::size_t computed = 0;
  std::size_t cache_hits = 0;
};

// Measures one image: complexity and vulnerability with seeds derived from
// (global_seed, image id, purpose).
MeasureRecord measure_image(const RunConfig& cfg, const FeatureModel& model,
                            const ImageTensor& image, const std::string& digest);

// Measures in-memory images on `cfg.workers` threads. Output is sorted by
// image id and does not depend on the worker count. Image ids must be
// unique.
MeasureFile measure_images(const RunConfig& cfg, const FeatureModel& model,
                           std::span<const ImageTensor> images,
                           MeasureStats* stats = nullptr);

// Measures every image below `dir`. Unreadable or mis-shaped images are
// listed in header.skipped. Records are cached in cfg.cache_dir when set and
// reused only if params_hash, model_id, seed, image id and file digest all
// match.
MeasureFile measure_directory(const RunConfig& cfg, const FeatureModel& model,
                              const std::filesystem::path& dir,
                              MeasureStats* stats = nullptr);

// Builds the configured model, measures the real or generated directory and
// writes <output_dir>/<real|generated>.jsonl. Returns the written path.
std::filesystem::path measure_dataset(const RunConfig& cfg, DatasetRole which);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_MEASURE_H_
