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

#include "anomaly/harness/measure_file.h"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "anomaly/errors.h"

namespace anomaly::harness {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "anomaly-measures";
constexpr int kFormatVersion = 1;

json record_json(const MeasureRecord& r) {
  return json{{"image_id", r.image_id},
              {"complexity", r.complexity},
              {"vulnerability", r.vulnerability},
              {"model_id", r.model_id},
              {"params_hash", r.params_hash},
              {"seed", r.seed},
              {"image_digest", r.image_digest},
              {"skipped_terms", r.skipped_terms},
              {"attack_terminated_early", r.attack_terminated_early}};
}

MeasureRecord record_from(const json& j) {
  MeasureRecord r;
  r.image_id = j.at("image_id").get<std::string>();
  r.complexity = j.at("complexity").get<double>();
  r.vulnerability = j.at("vulnerability").get<double>();
  r.model_id = j.at("model_id").get<std::string>();
  r.params_hash = j.at("params_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.image_digest = j.value("image_digest", std::string());
  r.skipped_terms = j.value("skipped_terms", 0);
  r.attack_terminated_early = j.value("attack_terminated_early", false);
  return r;
}

}  // namespace

std::string record_to_json(const MeasureRecord& r) { return record_json(r).dump(); }

MeasureRecord record_from_json(const std::string& line) {
  try {
    return record_from(json::parse(line));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed measure record: ") + e.what());
  }
}

std::string serialize_measure_file(const MeasureFile& file) {
  const MeasureHeader& h = file.header;
  json skipped = json::array();
  for (const auto& s : h.skipped) {
    skipped.push_back({{"image_id", s.image_id}, {"reason", s.reason}});
  }
  const json header{
      {"format", kFormat},
      {"format_version", kFormatVersion},
      {"tool_version", h.tool_version},
      {"params_hash", h.params_hash},
      {"model_id", h.model_id},
      {"global_seed", h.global_seed},
      {"pixel_convention", h.pixel_convention},
      {"params",
       {{"epsilon", h.trajectory.epsilon},
        {"K", h.trajectory.steps},
        {"alpha", h.attack.alpha},
        {"delta", h.attack.delta},
        {"J", h.attack.steps}}},
      {"n_records", file.records.size()},
      {"skipped", skipped}};
  std::string out = header.dump();
  out += '\n';
  std::vector<const MeasureRecord*> sorted;
  for (const auto& r : file.records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->image_id < b->image_id;
  });
  for (const auto* r : sorted) {
    out += record_json(*r).dump();
    out += '\n';
  }
  return out;
}

void write_measure_file(const std::filesystem::path& path, const MeasureFile& file) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << serialize_measure_file(file);
  if (!out) throw InputError("write failed for " + path.string());
}

MeasureFile parse_measure_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MeasureFile file;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError("measure file line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("format", std::string()) != kFormat) {
          throw InputError("not a measure file (missing header)");
        }
        MeasureHeader& h = file.header;
        h.tool_version = j.at("tool_version").get<std::string>();
        h.params_hash = j.at("params_hash").get<std::string>();
        h.model_id = j.at("model_id").get<std::string>();
        h.global_seed = j.at("global_seed").get<std::uint64_t>();
        h.pixel_convention = j.value("pixel_convention", std::string());
        const json& p = j.at("params");
        h.trajectory.epsilon = p.at("epsilon").get<double>();
        h.trajectory.steps = p.at("K").get<int>();
        h.attack.alpha = p.at("alpha").get<double>();
        h.attack.delta = p.at("delta").get<double>();
        h.attack.steps = p.at("J").get<int>();
        h.n_records = j.at("n_records").get<std::size_t>();
        for (const auto& s : j.value("skipped", json::array())) {
          h.skipped.push_back({s.at("image_id").get<std::string>(),
                               s.at("reason").get<std::string>()});
        }
        have_header = true;
      } else {
        file.records.push_back(record_from(j));
      }
    } catch (const json::exception& e) {
      throw InputError("measure file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw InputError("measure file is empty");
  if (file.records.size() != file.header.n_records) {
    throw InputError("measure file header announces " +
                     std::to_string(file.header.n_records) + " records, found " +
                     std::to_string(file.records.size()));
  }
  for (const auto& r : file.records) {
    if (r.params_hash != file.header.params_hash || r.model_id != file.header.model_id) {
      throw InputError("measure record '" + r.image_id +
                       "' disagrees with the file header on params_hash/model_id");
    }
  }
  return file;
}

MeasureFile read_measure_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read measure file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return with_context(path.string(), [&] { return parse_measure_file(ss.str()); });
}

}  // namespace anomaly::harness
