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

#include "anomaly/complexity.h"

#include <algorithm>
#include <cmath>

#include "anomaly/errors.h"

namespace anomaly {

void TrajectoryConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("trajectory epsilon must be a positive finite number");
  }
  if (steps < 2) throw InputError("trajectory needs K >= 2 steps");
}

TrajectoryResult complexity(const FeatureModel& model, const ImageTensor& x,
                            const TrajectoryConfig& cfg,
                            std::string_view material) {
  return complexity_along(model, x, cfg,
                          sample_unit_direction(material, x.shape()));
}

TrajectoryResult complexity_along(const FeatureModel& model,
                                  const ImageTensor& x,
                                  const TrajectoryConfig& cfg,
                                  const RandomDirection& direction) {
  cfg.validate();
  if (direction.shape != x.shape()) {
    throw InputError("complexity: direction shape " +
                     direction.shape.to_string() + " does not match image '" +
                     x.id() + "' " + x.shape().to_string());
  }
  const auto base = x.pixels();
  const int k_max = cfg.steps;

  std::vector<std::vector<double>> features;
  features.reserve(k_max + 1);
  std::vector<double> probe(base.size());
  for (int k = 0; k <= k_max; ++k) {
    const double scale = k * cfg.epsilon;
    for (std::size_t i = 0; i < base.size(); ++i) {
      probe[i] = base[i] + scale * direction.values[i];
    }
    FeatureVector f = with_context("image '" + x.id() + "'", [&] {
      return model.forward(ImageTensor::clipped(x.id(), x.shape(), probe));
    });
    if (!all_finite(f.values)) {
      throw NumericError("image '" + x.id() + "': non-finite feature at step " +
                         std::to_string(k));
    }
    features.push_back(std::move(f.values));
  }

  // deltas[k-1] = M(x^k) - M(x^{k-1}), k = 1..K
  const std::size_t dim = features.front().size();
  std::vector<std::vector<double>> deltas(k_max, std::vector<double>(dim));
  std::vector<double> norms(k_max);
  for (int k = 1; k <= k_max; ++k) {
    for (std::size_t d = 0; d < dim; ++d) {
      deltas[k - 1][d] = features[k][d] - features[k - 1][d];
    }
    norms[k - 1] = l2_norm(deltas[k - 1]);
  }

  TrajectoryResult out;
  out.per_step_angles.assign(k_max - 1, 0.0);
  double sum = 0.0;
  int used = 0;
  for (int k = 1; k <= k_max - 1; ++k) {
    const auto& a = deltas[k - 1];
    const auto& b = deltas[k];
    const double na = norms[k - 1];
    const double nb = norms[k];
    if (na < kMinStepNorm || nb < kMinStepNorm) {
      ++out.skipped_terms;
      continue;
    }
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) dot += a[d] * b[d];
    const double cosine = std::clamp(dot / (na * nb), -1.0, 1.0);
    const double angle = std::acos(cosine);
    out.per_step_angles[k - 1] = angle;
    sum += angle;
    ++used;
  }
  out.complexity = used > 0 ? sum / used : 0.0;
  return out;
}

}  // namespace anomaly
