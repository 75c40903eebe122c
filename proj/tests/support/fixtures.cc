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

#include "support/fixtures.h"

#include <cmath>
#include <limits>
#include <unistd.h>

#include "anomaly/random.h"

namespace fixtures {

using anomaly::ImageTensor;
using anomaly::RandomStream;

std::vector<double> random_values(const std::string& material, std::size_t n,
                                  double lo, double hi) {
  RandomStream rng(material);
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

ImageTensor random_image(const std::string& id, anomaly::Shape shape,
                         const std::string& material, double lo, double hi) {
  return ImageTensor(id, shape, random_values(material, shape.size(), lo, hi));
}

namespace {
double pixel_sum(const ImageTensor& x) {
  double s = 0.0;
  for (const double v : x.pixels()) s += v;
  return s;
}
}  // namespace

anomaly::FeatureVector QuadraticSumModel::forward(const ImageTensor& x) const {
  const double s = pixel_sum(x);
  return {{s, s * s}, id_};
}

std::vector<double> QuadraticSumModel::loss_gradient(const anomaly::FeatureVector& ref,
                                                     const ImageTensor& probe) const {
  const double s = pixel_sum(probe);
  const double d0 = s - ref.values[0], d1 = s * s - ref.values[1];
  const double n = std::sqrt(d0 * d0 + d1 * d1);
  const double ds = n == 0.0 ? 0.0 : (d0 + 2.0 * s * d1) / n;
  return std::vector<double>(probe.size(), ds);
}

anomaly::FeatureVector NanAboveModel::forward(const ImageTensor& x) const {
  const double s = pixel_sum(x);
  if (s > threshold_) return {{std::numeric_limits<double>::quiet_NaN(), 0.0}, id_};
  return {{s, std::sin(s)}, id_};
}

std::vector<double> NanAboveModel::loss_gradient(const anomaly::FeatureVector&,
                                                 const ImageTensor& probe) const {
  const double s = pixel_sum(probe);
  const double g = s > threshold_ ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  return std::vector<double>(probe.size(), g);
}

std::vector<anomaly::MeasureRecord> random_records(const std::string& material,
                                                   std::size_t n) {
  RandomStream rng(material);
  std::vector<anomaly::MeasureRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].image_id = "r" + std::to_string(i);
    out[i].complexity = 0.01 + 0.5 * rng.uniform();
    out[i].vulnerability = 10.0 * rng.uniform();
    out[i].model_id = "m";
    out[i].params_hash = "p";
  }
  return out;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("anomaly_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
