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

#ifndef ANOMALY_TOY_MODELS_H_
#define ANOMALY_TOY_MODELS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "anomaly/feature_model.h"

namespace anomaly {

// M(x) = A * flatten(x) + b. A is feature_dim x input size, row-major.
class AffineModel final : public FeatureModel {
 public:
  AffineModel(std::string model_id, Shape input_shape, std::vector<double> a,
              std::vector<double> b);

  const std::string& model_id() const override { return model_id_; }
  std::size_t feature_dim() const override { return bias_.size(); }
  FeatureVector forward(const ImageTensor& x) const override;
  std::vector<double> loss_gradient(const FeatureVector& reference,
                                    const ImageTensor& probe) const override;
  LossAndGradient loss_and_gradient(const FeatureVector& reference,
                                    const ImageTensor& probe) const override;

  const Shape& input_shape() const { return input_shape_; }
  const std::vector<double>& matrix() const { return matrix_; }
  const std::vector<double>& bias() const { return bias_; }

 private:
  std::string model_id_;
  Shape input_shape_;
  std::vector<double> matrix_;
  std::vector<double> bias_;
};

struct ToyNetOptions {
  int stage1_channels = 8;
  int stage2_channels = 8;
  // Multiplier on the 1/sqrt(fan_in) weight scale of both convolution stages.
  double gain = 1.5;
  // Makes every 3x3 plane of the first stage sum to zero, so that stage
  // responds to local contrast only and flat regions map to the bias.
  bool edge_filters = false;
};

// Two stride-2 3x3 convolution stages with tanh activations, then a linear
// head. The input is centred at 0.5 before the first stage. Gradients are
// exact (hand-written backward pass).
class ToyConvNet final : public FeatureModel {
 public:
  ToyConvNet(std::uint64_t seed, Shape input_shape, std::size_t feature_dim,
             ToyNetOptions options = {});

  const std::string& model_id() const override { return model_id_; }
  std::size_t feature_dim() const override { return feature_dim_; }
  FeatureVector forward(const ImageTensor& x) const override;
  std::vector<double> loss_gradient(const FeatureVector& reference,
                                    const ImageTensor& probe) const override;
  LossAndGradient loss_and_gradient(const FeatureVector& reference,
                                    const ImageTensor& probe) const override;

  const Shape& input_shape() const { return input_shape_; }

 private:
  struct Conv {
    int in_channels = 0;
    int out_channels = 0;
    Shape in_shape;
    Shape out_shape;
    std::vector<double> weights;  // [out][in][3][3]
    std::vector<double> bias;     // [out]
  };
  struct Activations {
    std::vector<double> a1;  // tanh(stage 1), HWC
    std::vector<double> a2;  // tanh(stage 2), HWC
    std::vector<double> features;
  };

  Activations run(const ImageTensor& x) const;
  std::vector<double> backward(const Activations& acts,
                               std::span<const double> feature_grad) const;
  void check_shape(const ImageTensor& x) const;

  static void conv_forward(const Conv& conv, std::span<const double> in,
                           std::vector<double>& out);
  static void conv_backward(const Conv& conv, std::span<const double> grad_out,
                            std::vector<double>& grad_in);

  std::string model_id_;
  Shape input_shape_;
  std::size_t feature_dim_;
  Conv stage1_;
  Conv stage2_;
  std::vector<double> head_;       // [feature_dim][stage2 size]
  std::vector<double> head_bias_;  // [feature_dim]
};

// Entries of A and b are seeded standard normals. Requires feature_dim >= 2.
std::unique_ptr<AffineModel> make_toy_affine_model(std::uint64_t seed,
                                                   Shape input_shape,
                                                   std::size_t feature_dim);

// Requires feature_dim >= 2.
std::unique_ptr<ToyConvNet> make_toy_nonlinear_model(
    std::uint64_t seed, Shape input_shape, std::size_t feature_dim,
    ToyNetOptions options = {});

}  // namespace anomaly

#endif  // ANOMALY_TOY_MODELS_H_
