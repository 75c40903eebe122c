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

#ifndef ANOMALY_HARNESS_CORRUPTION_H_
#define ANOMALY_HARNESS_CORRUPTION_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "anomaly/image.h"
#include "anomaly/scores.h"
#include "anomaly/stats.h"
#include "anomaly/harness/run_config.h"

namespace anomaly::harness {

// Seeded synthetic scene: a two-colour linear gradient with a handful of
// flat discs and rectangles drawn over it.
ImageTensor procedural_image(std::string id, Shape shape, std::string_view material);

struct CorruptionOptions {
  int blur_radius = 2;        // box blur half-width in pixels
  double noise_sigma = 0.01;  // Gaussian noise std at level 1
};

// level 0 returns x unchanged; level 1 is the fully blurred image plus
// noise_sigma Gaussian noise. Intermediate levels blend linearly.
ImageTensor corrupt(const ImageTensor& x, double level, const CorruptionOptions& options,
                    std::string_view material);

ImageTensor box_blur(const ImageTensor& x, int radius);

struct CorruptionBenchConfig {
  std::vector<std::uint64_t> seeds;  // one full experiment per global seed
  int n_images = 64;
  std::vector<double> levels{0.25, 0.5, 1.0};  // strictly increasing, > 0
  CorruptionOptions corruption;
  bool pooled_ttest = false;  // "t_test": "student" instead of Welch
  RunConfig run;  // model, trajectory, attack, workers
};

CorruptionBenchConfig parse_corruption_config(std::string_view json_text,
                                              const std::filesystem::path& base_dir = ".");
CorruptionBenchConfig load_corruption_config(const std::filesystem::path& path);

struct LevelResult {
  double level = 0.0;
  double anomaly_score = 0.0;  // 2D AS against the clean set
  double mean_complexity = 0.0;
  double mean_vulnerability = 0.0;
  double mean_asi = 0.0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<LevelResult> levels;  // levels[0] is the clean set, level 0
  bool strictly_increasing = false;
  TTestResult vulnerability_test;  // top level greater than clean
  TTestResult asi_test;            // top level greater than clean
  double asi_level_spearman = 0.0;
  double as_level_spearman = 0.0;
};

struct CorruptionReport {
  std::string model_id;
  std::string params_hash;
  KsCombine combine = KsCombine::kAverage;
  int n_images = 0;
  std::vector<SeedResult> seeds;
  double monotone_fraction = 0.0;
  double max_vulnerability_p = 0.0;  // worst seed
  double max_asi_p = 0.0;            // worst seed
  double mean_asi_spearman = 0.0;
  double mean_as_spearman = 0.0;
  double seconds = 0.0;
};

CorruptionReport run_corruption_benchmark(const CorruptionBenchConfig& cfg);

std::string corruption_report_json(const CorruptionReport& report);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_CORRUPTION_H_
