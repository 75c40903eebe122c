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

#ifndef ANOMALY_HARNESS_REPORT_H_
#define ANOMALY_HARNESS_REPORT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anomaly/scores.h"
#include "anomaly/harness/measure_file.h"

namespace anomaly::harness {

struct DatasetSummary {
  std::string name;
  std::string params_hash;
  std::string model_id;
  std::size_t n_images = 0;
  double mean_complexity = 0.0;
  double std_complexity = 0.0;
  double mean_vulnerability = 0.0;
  double std_vulnerability = 0.0;
  std::optional<double> mean_asi;  // empty when some complexity is degenerate
  std::map<std::string, double> anomaly_score;  // mode name -> AS, from score files

  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

DatasetSummary summarize(const MeasureFile& file, std::string name);

// A score written by `asmetric score`.
struct ScoreFile {
  ScoreResult result;
  std::string params_hash;
  std::string model_id;
  std::string real;
  std::string generated;
  std::string dataset;  // key used to join with human/baseline CSV rows
};

std::string score_file_json(const ScoreFile& score);
ScoreFile parse_score_file(std::string_view text);
ScoreFile read_score_file(const std::filesystem::path& path);

// CSV with a "dataset" column and any number of numeric columns
// (human_error_rate, fid, ...). Empty cells are treated as missing.
struct ExternalTable {
  std::vector<std::string> columns;  // numeric column names, file order
  std::map<std::string, std::map<std::string, double>> rows;  // dataset -> column -> value
};

ExternalTable parse_external_csv(std::string_view text);
ExternalTable read_external_csv(const std::filesystem::path& path);

struct Correlation {
  std::string column;
  std::string mode;
  std::size_t n = 0;
  std::optional<double> pearson;   // empty when undefined (n < 2 or zero variance)
  std::optional<double> spearman;
};

struct Report {
  std::string tool_version;
  std::string params_hash;
  std::string model_id;
  std::vector<DatasetSummary> datasets;
  std::vector<ScoreFile> scores;
  std::vector<Correlation> correlations;
};

// Throws InputError when inputs disagree on params_hash or model_id.
Report build_report(const std::vector<std::filesystem::path>& score_files,
                    const std::vector<std::filesystem::path>& measure_files,
                    const std::optional<std::filesystem::path>& external_csv);

std::string report_json(const Report& report);
std::vector<DatasetSummary> parse_report_datasets(std::string_view json_text);

std::string report_markdown(const Report& report);

// Empirical CDF step curves, one per measure file.
std::string cdf_svg(const std::vector<std::pair<std::string, std::vector<double>>>& series,
                    std::string_view x_label);

std::string scatter_svg(const std::vector<std::pair<double, double>>& points,
                        const std::vector<std::string>& labels, std::string_view x_label,
                        std::string_view y_label, std::string_view annotation);

// Writes summary.json, summary.md, cdf_complexity.svg, cdf_vulnerability.svg
// and, when a human_error_rate column exists, as_vs_human.svg.
void write_report(const std::filesystem::path& out_dir,
                  const std::vector<std::filesystem::path>& score_files,
                  const std::vector<std::filesystem::path>& measure_files,
                  const std::optional<std::filesystem::path>& external_csv);

// Expands a shell-style pattern with * and ? in its final path component.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace anomaly::harness

#endif  // ANOMALY_HARNESS_REPORT_H_
