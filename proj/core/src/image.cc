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

#include "anomaly/image.h"

#include <cmath>
#include <utility>

#include "anomaly/errors.h"

namespace anomaly {

std::string Shape::to_string() const {
  return std::to_string(height) + "x" + std::to_string(width) + "x" +
         std::to_string(channels);
}

ImageTensor::ImageTensor(std::string id, Shape shape, std::vector<double> pixels)
    : id_(std::move(id)), shape_(shape), pixels_(std::move(pixels)) {
  if (id_.empty()) throw InputError("image id must be non-empty");
  if (!shape_.valid()) {
    throw InputError("image '" + id_ + "' has non-positive shape " +
                     shape_.to_string());
  }
  if (pixels_.size() != shape_.size()) {
    throw InputError("image '" + id_ + "': expected " +
                     std::to_string(shape_.size()) + " pixel values, got " +
                     std::to_string(pixels_.size()));
  }
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    const double v = pixels_[i];
    // Written to reject NaN as well.
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InputError("image '" + id_ + "': pixel " + std::to_string(i) +
                       " out of [0, 1]");
    }
  }
}

ImageTensor ImageTensor::filled(std::string id, Shape shape, double value) {
  return ImageTensor(std::move(id), shape,
                     std::vector<double>(shape.valid() ? shape.size() : 0, value));
}

ImageTensor ImageTensor::clipped(std::string id, Shape shape,
                                 std::vector<double> values) {
  for (double& v : values) {
    if (std::isnan(v)) {
      throw NumericError("image '" + id + "': NaN pixel before clipping");
    }
    v = clip01(v);
  }
  return ImageTensor(std::move(id), shape, std::move(values));
}

}  // namespace anomaly
