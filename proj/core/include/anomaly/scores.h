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

#ifndef ANOMALY_SCORES_H_
#define ANOMALY_SCORES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace anomaly {

// The anomaly vector [C(x), V(x)] of one image plus its provenance.
struct MeasureRecord {
  std::string image_id;
  double complexity = 0.0;
  double vulnerability = 0.0;
  std::string model_id;
  std::string params_hash;
  std::uint64_t seed = 0;
  std::string image_digest;  // SHA-256 of the source file; may be empty
  int skipped_terms = 0;
  bool attack_terminated_early = false;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// How the two anchor-set maxima of the 2D statistic are combined.
enum class KsCombine { kAverage, kMax };

enum class ScoreMode { k2d, kComplexity1d, kVulnerability1d };

std::string_view to_string(KsCombine c);
std::string_view to_string(ScoreMode m);
KsCombine parse_ks_combine(std::string_view s);
// Accepts "2d", "complexity", "complexity_1d", "vulnerability",
// "vulnerability_1d".
ScoreMode parse_score_mode(std::string_view s);

// Two-sample Fasano-Franceschini statistic. For every anchor point, each of
// the four quadrants (<=,<=), (<=,>), (>,<=), (>,>) relative to it is
// compared between the samples; ties go to the <= side. D1 uses anchors from
// `a`, D2 anchors from `b`. Returns (D1 + D2) / 2 or max(D1, D2).
//
// Runs in O((n + m) log(n + m)) using sweep-line dominance counting.
double ks2d(std::span<const Point2> a, std::span<const Point2> b,
            KsCombine combine = KsCombine::kAverage);

// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over right-
// continuous empirical CDFs.
double ks1d(std::span<const double> a, std::span<const double> b);

struct ScoreResult {
  double value = 0.0;
  ScoreMode mode = ScoreMode::k2d;
  KsCombine combine = KsCombine::kAverage;
  std::size_t n_real = 0;
  std::size_t n_generated = 0;
};

// AS between a reference and a generated set. Both lists must share one
// model_id and params_hash.
ScoreResult anomaly_score(std::span<const MeasureRecord> real,
                          std::span<const MeasureRecord> generated,
                          ScoreMode mode = ScoreMode::k2d,
                          KsCombine combine = KsCombine::kAverage);

// Complexities at or below this are degenerate for AS-i.
inline constexpr double kMinAsiComplexity = 1e-12;

// V(x) / C(x).
double asi(const MeasureRecord& record);
double mean_asi(std::span<const MeasureRecord> records);

}  // namespace anomaly

#endif  // ANOMALY_SCORES_H_
