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

#ifndef ANOMALY_IMAGE_H_
#define ANOMALY_IMAGE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace anomaly {

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
  bool valid() const { return height > 0 && width > 0 && channels > 0; }
  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

// An H x W x C image with pixels in [0, 1], stored row-major in HWC order.
class ImageTensor {
 public:
  // Throws InputError if the id is empty, the shape is not positive, the
  // pixel count does not match, or any pixel lies outside [0, 1].
  ImageTensor(std::string id, Shape shape, std::vector<double> pixels);

  static ImageTensor filled(std::string id, Shape shape, double value);

  // Builds an image from arbitrary values, clipping each one to [0, 1].
  static ImageTensor clipped(std::string id, Shape shape,
                             std::vector<double> values);

  const std::string& id() const { return id_; }
  const Shape& shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  int channels() const { return shape_.channels; }
  std::size_t size() const { return pixels_.size(); }

  std::span<const double> pixels() const { return pixels_; }

  double at(int y, int x, int c) const {
    return pixels_[(static_cast<std::size_t>(y) * shape_.width + x) *
                       shape_.channels +
                   c];
  }

 private:
  std::string id_;
  Shape shape_;
  std::vector<double> pixels_;
};

inline std::size_t pixel_index(const Shape& s, int y, int x, int c) {
  return (static_cast<std::size_t>(y) * s.width + x) * s.channels + c;
}

inline double clip01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace anomaly

#endif  // ANOMALY_IMAGE_H_
