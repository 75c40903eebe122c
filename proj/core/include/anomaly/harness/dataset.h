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

#ifndef ANOMALY_HARNESS_DATASET_H_
#define ANOMALY_HARNESS_DATASET_H_

#include <filesystem>
#include <string>
#include <vector>

namespace anomaly::harness {

struct DatasetEntry {
  std::string id;  // path relative to the dataset root, '/'-separated
  std::filesystem::path path;
};

// All .png/.jpg/.jpeg files below `root` (case-insensitive), sorted by id.
// Throws InputError if the directory is missing or holds no images.
std::vector<DatasetEntry> list_images(const std::filesystem::path& root);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_DATASET_H_
