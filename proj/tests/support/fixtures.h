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

#ifndef ANOMALY_TESTS_FIXTURES_H_
#define ANOMALY_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "anomaly/feature_model.h"
#include "anomaly/image.h"
#include "anomaly/scores.h"

namespace fixtures {

// Uniform pixels in [lo, hi] drawn from a stream keyed by `material`.
anomaly::ImageTensor random_image(const std::string& id, anomaly::Shape shape,
                                  const std::string& material, double lo = 0.3,
                                  double hi = 0.7);

std::vector<double> random_values(const std::string& material, std::size_t n,
                                  double lo, double hi);

// M(x) = c for every input.
class ConstantModel final : public anomaly::FeatureModel {
 public:
  explicit ConstantModel(std::vector<double> c) : c_(std::move(c)) {}
  const std::string& model_id() const override { return id_; }
  std::size_t feature_dim() const override { return c_.size(); }
  anomaly::FeatureVector forward(const anomaly::ImageTensor&) const override {
    return {c_, id_};
  }
  std::vector<double> loss_gradient(const anomaly::FeatureVector&,
                                    const anomaly::ImageTensor& probe) const override {
    return std::vector<double>(probe.size(), 0.0);
  }

 private:
  std::vector<double> c_;
  std::string id_ = "constant";
};

// M(x) = [s, s^2] with s = sum of pixels.
class QuadraticSumModel final : public anomaly::FeatureModel {
 public:
  const std::string& model_id() const override { return id_; }
  std::size_t feature_dim() const override { return 2; }
  anomaly::FeatureVector forward(const anomaly::ImageTensor& x) const override;
  std::vector<double> loss_gradient(const anomaly::FeatureVector& ref,
                                    const anomaly::ImageTensor& probe) const override;

 private:
  std::string id_ = "quadratic_sum";
};

// Returns NaN features once the pixel sum exceeds `threshold`.
class NanAboveModel final : public anomaly::FeatureModel {
 public:
  explicit NanAboveModel(double threshold) : threshold_(threshold) {}
  const std::string& model_id() const override { return id_; }
  std::size_t feature_dim() const override { return 2; }
  anomaly::FeatureVector forward(const anomaly::ImageTensor& x) const override;
  std::vector<double> loss_gradient(const anomaly::FeatureVector& ref,
                                    const anomaly::ImageTensor& probe) const override;

 private:
  double threshold_;
  std::string id_ = "nan_above";
};

std::vector<anomaly::MeasureRecord> random_records(const std::string& material,
                                                   std::size_t n);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace fixtures

#endif  // ANOMALY_TESTS_FIXTURES_H_
