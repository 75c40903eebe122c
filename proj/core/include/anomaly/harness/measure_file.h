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

#ifndef ANOMALY_HARNESS_MEASURE_FILE_H_
#define ANOMALY_HARNESS_MEASURE_FILE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "anomaly/complexity.h"
#include "anomaly/scores.h"
#include "anomaly/vulnerability.h"

namespace anomaly::harness {

struct SkippedImage {
  std::string image_id;
  std::string reason;
};

// First line of a measure file.
struct MeasureHeader {
  std::string tool_version;
  std::string params_hash;
  std::string model_id;
  std::uint64_t global_seed = 0;
  TrajectoryConfig trajectory;
  AttackConfig attack;
  std::string pixel_convention;
  std::size_t n_records = 0;
  std::vector<SkippedImage> skipped;
};

struct MeasureFile {
  MeasureHeader header;
  std::vector<MeasureRecord> records;  // sorted by image_id
};

// JSON Lines: one header object, then one record per line, sorted by
// image_id. Output depends only on the contents (no timestamps), so equal
// inputs give byte-identical files.
std::string serialize_measure_file(const MeasureFile& file);
void write_measure_file(const std::filesystem::path& path, const MeasureFile& file);

MeasureFile parse_measure_file(const std::string& text);
MeasureFile read_measure_file(const std::filesystem::path& path);

std::string record_to_json(const MeasureRecord& r);
MeasureRecord record_from_json(const std::string& line);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_MEASURE_FILE_H_
