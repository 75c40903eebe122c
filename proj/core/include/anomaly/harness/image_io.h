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

#ifndef ANOMALY_HARNESS_IMAGE_IO_H_
#define ANOMALY_HARNESS_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "anomaly/image.h"

namespace anomaly::harness {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

// Decodes PNG or JPEG (sniffed from the magic bytes) to 1 or 3 channels;
// 8-bit values map to [0, 1] by /255. Alpha is dropped.
ImageTensor decode_image(std::span<const std::uint8_t> bytes, std::string id);

ImageTensor load_image(const std::filesystem::path& path, std::string id);

// Writes an 8-bit PNG (grey for 1 channel, RGB for 3).
void write_png(const std::filesystem::path& path, const ImageTensor& img);

// Pixel values quantised exactly as write_png stores them.
std::vector<std::uint8_t> quantize(const ImageTensor& img);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_IMAGE_IO_H_
