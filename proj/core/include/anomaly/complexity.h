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

#ifndef ANOMALY_COMPLEXITY_H_
#define ANOMALY_COMPLEXITY_H_

#include <string_view>
#include <vector>

#include "anomaly/feature_model.h"
#include "anomaly/image.h"
#include "anomaly/random.h"

namespace anomaly {

struct TrajectoryConfig {
  double epsilon = 0.01;  // per-step noise magnitude, [0, 1] pixel units
  int steps = 10;         // K; the walk visits x^0 .. x^K

  void validate() const;
};

struct TrajectoryResult {
  double complexity = 0.0;  // radians, mean of the non-skipped angles
  // K-1 chord angles; angle k-1 is between M(x^k)-M(x^{k-1}) and
  // M(x^{k+1})-M(x^k). Skipped terms are reported as 0.
  std::vector<double> per_step_angles;
  int skipped_terms = 0;
};

// Angles whose adjacent feature steps are shorter than this are skipped.
inline constexpr double kMinStepNorm = 1e-12;

// Mean angle between successive feature-space steps along the linear walk
// x^k = clip(x + k * epsilon * N), with N drawn from `material`.
TrajectoryResult complexity(const FeatureModel& model, const ImageTensor& x,
                            const TrajectoryConfig& cfg,
                            std::string_view material);

// Same, along a caller-supplied unit direction.
TrajectoryResult complexity_along(const FeatureModel& model,
                                  const ImageTensor& x,
                                  const TrajectoryConfig& cfg,
                                  const RandomDirection& direction);

}  // namespace anomaly

#endif  // ANOMALY_COMPLEXITY_H_
