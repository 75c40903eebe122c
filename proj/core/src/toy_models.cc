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

#include "anomaly/toy_models.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "anomaly/errors.h"
#include "anomaly/hashing.h"
#include "anomaly/random.h"

namespace anomaly {
namespace {

void check_feature_dim(std::size_t feature_dim) {
  if (feature_dim < 2) {
    throw InputError("toy models need feature_dim >= 2, got " +
                     std::to_string(feature_dim));
  }
}

void check_reference(const FeatureVector& reference, std::size_t dim) {
  if (reference.values.size() != dim) {
    throw InputError("reference feature has dimension " +
                     std::to_string(reference.values.size()) + ", model has " +
                     std::to_string(dim));
  }
}

// Returns (f - ref) / ||f - ref|| and the distance; zero direction at zero
// distance.
double loss_direction(std::span<const double> features,
                      std::span<const double> reference,
                      std::vector<double>& direction) {
  direction.resize(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    direction[i] = features[i] - reference[i];
  }
  const double dist = l2_norm(direction);
  if (dist == 0.0) {
    std::fill(direction.begin(), direction.end(), 0.0);
  } else {
    for (double& v : direction) v /= dist;
  }
  return dist;
}

std::vector<double> normals(std::string_view material, std::size_t n,
                            double scale) {
  RandomStream stream(material);
  std::vector<double> out(n);
  for (double& v : out) v = scale * stream.normal();
  return out;
}

}  // namespace

AffineModel::AffineModel(std::string model_id, Shape input_shape,
                         std::vector<double> a, std::vector<double> b)
    : model_id_(std::move(model_id)),
      input_shape_(input_shape),
      matrix_(std::move(a)),
      bias_(std::move(b)) {
  if (matrix_.size() != bias_.size() * input_shape_.size()) {
    throw InputError("affine model: matrix size does not match shape");
  }
}

FeatureVector AffineModel::forward(const ImageTensor& x) const {
  if (x.shape() != input_shape_) {
    throw InputError("model " + model_id_ + " expects shape " +
                     input_shape_.to_string() + ", got " +
                     x.shape().to_string() + " for '" + x.id() + "'");
  }
  const std::size_t n = input_shape_.size();
  const auto px = x.pixels();
  FeatureVector out{std::vector<double>(bias_.size()), model_id_};
  for (std::size_t i = 0; i < bias_.size(); ++i) {
    const double* row = matrix_.data() + i * n;
    double acc = bias_[i];
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * px[j];
    out.values[i] = acc;
  }
  return out;
}

LossAndGradient AffineModel::loss_and_gradient(const FeatureVector& reference,
                                               const ImageTensor& probe) const {
  check_reference(reference, bias_.size());
  const FeatureVector f = forward(probe);
  std::vector<double> dir;
  LossAndGradient out;
  out.loss = loss_direction(f.values, reference.values, dir);
  const std::size_t n = input_shape_.size();
  out.gradient.assign(n, 0.0);
  for (std::size_t i = 0; i < bias_.size(); ++i) {
    const double* row = matrix_.data() + i * n;
    const double w = dir[i];
    for (std::size_t j = 0; j < n; ++j) out.gradient[j] += row[j] * w;
  }
  return out;
}

std::vector<double> AffineModel::loss_gradient(const FeatureVector& reference,
                                               const ImageTensor& probe) const {
  return loss_and_gradient(reference, probe).gradient;
}

std::unique_ptr<AffineModel> make_toy_affine_model(std::uint64_t seed,
                                                   Shape input_shape,
                                                   std::size_t feature_dim) {
  check_feature_dim(feature_dim);
  if (!input_shape.valid()) throw InputError("affine model: invalid shape");
  const std::string base = "affine\x1f" + std::to_string(seed) + "\x1f" +
                           input_shape.to_string() + "\x1f" +
                           std::to_string(feature_dim);
  auto a = normals(base + "\x1f" "A", feature_dim * input_shape.size(), 1.0);
  auto b = normals(base + "\x1f" "b", feature_dim, 1.0);
  const std::string id = "affine:s" + std::to_string(seed) + ":d" +
                         std::to_string(feature_dim) + ":" +
                         input_shape.to_string();
  return std::make_unique<AffineModel>(id, input_shape, std::move(a),
                                       std::move(b));
}

// ---------------------------------------------------------------------------

ToyConvNet::ToyConvNet(std::uint64_t seed, Shape input_shape,
                       std::size_t feature_dim, ToyNetOptions options)
    : input_shape_(input_shape), feature_dim_(feature_dim) {
  check_feature_dim(feature_dim);
  if (!input_shape.valid()) throw InputError("toy network: invalid shape");
  if (options.stage1_channels < 1 || options.stage2_channels < 1) {
    throw InputError("toy network: channel counts must be positive");
  }
  const auto down = [](Shape s, int channels) {
    return Shape{(s.height + 1) / 2, (s.width + 1) / 2, channels};
  };
  const std::string base = "toy_nonlinear\x1f" + std::to_string(seed) + "\x1f" +
                           input_shape.to_string() + "\x1f" +
                           std::to_string(feature_dim) + "\x1f" +
                           std::to_string(options.stage1_channels) + "\x1f" +
                           std::to_string(options.stage2_channels) + "\x1f" +
                           format_double(options.gain) +
                           (options.edge_filters ? "\x1f" "edge" : "");

  auto init_conv = [&](Conv& conv, Shape in, int out_channels,
                       const char* tag) {
    conv.in_channels = in.channels;
    conv.out_channels = out_channels;
    conv.in_shape = in;
    conv.out_shape = down(in, out_channels);
    const double scale = options.gain / std::sqrt(9.0 * in.channels);
    conv.weights = normals(base + "\x1f" + tag + "w",
                           static_cast<std::size_t>(out_channels) * in.channels * 9,
                           scale);
    conv.bias = normals(base + "\x1f" + tag + "b", out_channels, 0.1);
  };
  init_conv(stage1_, input_shape, options.stage1_channels, "conv1");
  if (options.edge_filters) {
    for (std::size_t plane = 0; plane + 9 <= stage1_.weights.size(); plane += 9) {
      double m = 0.0;
      for (int t = 0; t < 9; ++t) m += stage1_.weights[plane + t];
      m /= 9.0;
      for (int t = 0; t < 9; ++t) stage1_.weights[plane + t] -= m;
    }
  }
  init_conv(stage2_, stage1_.out_shape, options.stage2_channels, "conv2");

  const std::size_t flat = stage2_.out_shape.size();
  head_ = normals(base + "\x1f" "head_w", feature_dim * flat,
                  1.0 / std::sqrt(static_cast<double>(flat)));
  head_bias_ = normals(base + "\x1f" "head_b", feature_dim, 0.1);

  model_id_ = "toy_nonlinear:s" + std::to_string(seed) + ":d" +
              std::to_string(feature_dim) + ":" + input_shape.to_string() +
              ":c" + std::to_string(options.stage1_channels) + "x" +
              std::to_string(options.stage2_channels) + ":g" +
              format_double(options.gain) + (options.edge_filters ? ":edge" : "");
}

void ToyConvNet::check_shape(const ImageTensor& x) const {
  if (x.shape() != input_shape_) {
    throw InputError("model " + model_id_ + " expects shape " +
                     input_shape_.to_string() + ", got " +
                     x.shape().to_string() + " for '" + x.id() + "'");
  }
}

void ToyConvNet::conv_forward(const Conv& conv, std::span<const double> in,
                              std::vector<double>& out) {
  const Shape& is = conv.in_shape;
  const Shape& os = conv.out_shape;
  out.assign(os.size(), 0.0);
  for (int oy = 0; oy < os.height; ++oy) {
    for (int ox = 0; ox < os.width; ++ox) {
      double* dst = out.data() + pixel_index(os, oy, ox, 0);
      for (int o = 0; o < conv.out_channels; ++o) dst[o] = conv.bias[o];
      for (int ky = 0; ky < 3; ++ky) {
        const int iy = 2 * oy + ky - 1;
        if (iy < 0 || iy >= is.height) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const int ix = 2 * ox + kx - 1;
          if (ix < 0 || ix >= is.width) continue;
          const double* src = in.data() + pixel_index(is, iy, ix, 0);
          for (int o = 0; o < conv.out_channels; ++o) {
            const double* w =
                conv.weights.data() +
                (static_cast<std::size_t>(o) * conv.in_channels * 9) + ky * 3 + kx;
            double acc = 0.0;
            for (int c = 0; c < conv.in_channels; ++c) acc += w[c * 9] * src[c];
            dst[o] += acc;
          }
        }
      }
    }
  }
}

void ToyConvNet::conv_backward(const Conv& conv,
                               std::span<const double> grad_out,
                               std::vector<double>& grad_in) {
  const Shape& is = conv.in_shape;
  const Shape& os = conv.out_shape;
  grad_in.assign(is.size(), 0.0);
  for (int oy = 0; oy < os.height; ++oy) {
    for (int ox = 0; ox < os.width; ++ox) {
      const double* g = grad_out.data() + pixel_index(os, oy, ox, 0);
      for (int ky = 0; ky < 3; ++ky) {
        const int iy = 2 * oy + ky - 1;
        if (iy < 0 || iy >= is.height) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const int ix = 2 * ox + kx - 1;
          if (ix < 0 || ix >= is.width) continue;
          double* dst = grad_in.data() + pixel_index(is, iy, ix, 0);
          for (int o = 0; o < conv.out_channels; ++o) {
            const double* w =
                conv.weights.data() +
                (static_cast<std::size_t>(o) * conv.in_channels * 9) + ky * 3 + kx;
            for (int c = 0; c < conv.in_channels; ++c) dst[c] += w[c * 9] * g[o];
          }
        }
      }
    }
  }
}

ToyConvNet::Activations ToyConvNet::run(const ImageTensor& x) const {
  check_shape(x);
  std::vector<double> centred(x.pixels().begin(), x.pixels().end());
  for (double& v : centred) v -= 0.5;

  Activations acts;
  conv_forward(stage1_, centred, acts.a1);
  for (double& v : acts.a1) v = std::tanh(v);
  conv_forward(stage2_, acts.a1, acts.a2);
  for (double& v : acts.a2) v = std::tanh(v);

  const std::size_t flat = acts.a2.size();
  acts.features.resize(feature_dim_);
  for (std::size_t i = 0; i < feature_dim_; ++i) {
    const double* row = head_.data() + i * flat;
    double acc = head_bias_[i];
    for (std::size_t j = 0; j < flat; ++j) acc += row[j] * acts.a2[j];
    acts.features[i] = acc;
  }
  return acts;
}

std::vector<double> ToyConvNet::backward(
    const Activations& acts, std::span<const double> feature_grad) const {
  const std::size_t flat = acts.a2.size();
  std::vector<double> grad_pre2(flat, 0.0);
  for (std::size_t i = 0; i < feature_dim_; ++i) {
    const double* row = head_.data() + i * flat;
    const double g = feature_grad[i];
    if (g == 0.0) continue;
    for (std::size_t j = 0; j < flat; ++j) grad_pre2[j] += row[j] * g;
  }
  for (std::size_t j = 0; j < flat; ++j) {
    grad_pre2[j] *= 1.0 - acts.a2[j] * acts.a2[j];
  }
  std::vector<double> grad_pre1;
  conv_backward(stage2_, grad_pre2, grad_pre1);
  for (std::size_t j = 0; j < grad_pre1.size(); ++j) {
    grad_pre1[j] *= 1.0 - acts.a1[j] * acts.a1[j];
  }
  std::vector<double> grad_input;
  conv_backward(stage1_, grad_pre1, grad_input);
  return grad_input;
}

FeatureVector ToyConvNet::forward(const ImageTensor& x) const {
  return FeatureVector{run(x).features, model_id_};
}

LossAndGradient ToyConvNet::loss_and_gradient(const FeatureVector& reference,
                                              const ImageTensor& probe) const {
  check_reference(reference, feature_dim_);
  const Activations acts = run(probe);
  std::vector<double> dir;
  LossAndGradient out;
  out.loss = loss_direction(acts.features, reference.values, dir);
  out.gradient = backward(acts, dir);
  return out;
}

std::vector<double> ToyConvNet::loss_gradient(const FeatureVector& reference,
                                              const ImageTensor& probe) const {
  return loss_and_gradient(reference, probe).gradient;
}

std::unique_ptr<ToyConvNet> make_toy_nonlinear_model(std::uint64_t seed,
                                                     Shape input_shape,
                                                     std::size_t feature_dim,
                                                     ToyNetOptions options) {
  return std::make_unique<ToyConvNet>(seed, input_shape, feature_dim, options);
}

}  // namespace anomaly
