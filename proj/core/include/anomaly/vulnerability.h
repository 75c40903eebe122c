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

#ifndef ANOMALY_VULNERABILITY_H_
#define ANOMALY_VULNERABILITY_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "anomaly/feature_model.h"
#include "anomaly/image.h"
#include "anomaly/random.h"

namespace anomaly {

struct AttackConfig {
  double alpha = 0.01;   // L2 step size per iteration, [0, 1] pixel units
  double delta = 1e-6;   // magnitude of the random starting offset
  int steps = 10;        // J
  // Optional 0/1 per pixel entry (HWC); only entries set to 1 are perturbed,
  // including by the starting offset.
  std::optional<std::vector<std::uint8_t>> mask;

  void validate(const Shape& shape) const;
};

struct AttackResult {
  double vulnerability = 0.0;
  // Feature distance after each completed update.
  std::vector<double> per_step_distance;
  bool terminated_early = false;
  std::vector<double> final_iterate;  // pixels of the last attack iterate
};

// Gradients with a smaller global L2 norm stop the attack.
inline constexpr double kMinGradientNorm = 1e-20;

// Feature-space PGD: starting from clip(x + delta * N), take J normalised
// gradient-ascent steps on ||M(x) - M(x^j)|| and report the final feature
// displacement.
AttackResult vulnerability(const FeatureModel& model, const ImageTensor& x,
                           const AttackConfig& cfg, std::string_view material);

// Same, with a caller-supplied starting direction N.
AttackResult vulnerability_from(const FeatureModel& model,
                                const ImageTensor& x, const AttackConfig& cfg,
                                const RandomDirection& start_direction);

}  // namespace anomaly

#endif  // ANOMALY_VULNERABILITY_H_
