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

#ifndef ANOMALY_FEATURE_MODEL_H_
#define ANOMALY_FEATURE_MODEL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "anomaly/image.h"

namespace anomaly {

struct FeatureVector {
  std::vector<double> values;
  std::string model_id;

  std::size_t dim() const { return values.size(); }
};

bool all_finite(std::span<const double> values);
double l2_norm(std::span<const double> values);
double l2_distance(std::span<const double> a, std::span<const double> b);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

// A frozen, deterministic, differentiable map from images to features.
//
// The loss used by the attack engine is the (unsquared) L2 distance between
// forward(probe) and a reference feature. At zero distance the gradient is
// defined as the zero vector.
//
// Implementations must be safe for concurrent calls to the const methods.
class FeatureModel {
 public:
  virtual ~FeatureModel() = default;

  virtual const std::string& model_id() const = 0;
  virtual std::size_t feature_dim() const = 0;

  virtual FeatureVector forward(const ImageTensor& x) const = 0;

  // d/d(probe) || forward(probe) - reference ||, shaped like probe.pixels().
  virtual std::vector<double> loss_gradient(const FeatureVector& reference,
                                            const ImageTensor& probe) const = 0;

  // Loss value and gradient in one pass. The default calls forward() and
  // loss_gradient(); models with a shared forward pass should override.
  virtual LossAndGradient loss_and_gradient(const FeatureVector& reference,
                                            const ImageTensor& probe) const;
};

}  // namespace anomaly

#endif  // ANOMALY_FEATURE_MODEL_H_
