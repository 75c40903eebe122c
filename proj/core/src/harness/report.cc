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

#include "anomaly/harness/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "anomaly/errors.h"
#include "anomaly/hashing.h"
#include "anomaly/stats.h"
#include "anomaly/harness/run_config.h"

namespace anomaly::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw InputError("csv: unterminated quote");
  cells.push_back(trim(cur));
  return cells;
}

std::optional<double> nullable(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v) { return format_double(v); }

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Frame {
  double x0, x1, y0, y1;
  static constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 30,
                          kBottom = 50;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); }
  double py(double y) const { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double m = 0.03 * (hi - lo);
  lo -= m;
  hi += m;
}

std::string svg_axes(const Frame& f, std::string_view x_label, std::string_view y_label) {
  std::ostringstream o;
  o << "<rect x=\"0\" y=\"0\" width=\"" << Frame::kW << "\" height=\"" << Frame::kH
    << "\" fill=\"white\"/>\n";
  o << "<line x1=\"" << Frame::kLeft << "\" y1=\"" << Frame::kH - Frame::kBottom << "\" x2=\""
    << Frame::kW - Frame::kRight << "\" y2=\"" << Frame::kH - Frame::kBottom
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << Frame::kLeft << "\" y1=\"" << Frame::kTop << "\" x2=\"" << Frame::kLeft
    << "\" y2=\"" << Frame::kH - Frame::kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", xv);
    o << "<text x=\"" << f.px(xv) << "\" y=\"" << Frame::kH - Frame::kBottom + 16
      << "\" font-size=\"11\" text-anchor=\"middle\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", yv);
    o << "<text x=\"" << Frame::kLeft - 6 << "\" y=\"" << f.py(yv) + 4
      << "\" font-size=\"11\" text-anchor=\"end\">" << buf << "</text>\n";
  }
  o << "<text x=\"" << (Frame::kLeft + Frame::kW - Frame::kRight) / 2 << "\" y=\""
    << Frame::kH - 12 << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(x_label)
    << "</text>\n";
  o << "<text x=\"16\" y=\"" << (Frame::kTop + Frame::kH - Frame::kBottom) / 2
    << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (Frame::kTop + Frame::kH - Frame::kBottom) / 2 << ")\">" << xml_escape(y_label)
    << "</text>\n";
  return o.str();
}

std::string svg_open() {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::kW << "\" height=\""
    << Frame::kH << "\" viewBox=\"0 0 " << Frame::kW << ' ' << Frame::kH << "\">\n";
  return o.str();
}

}  // namespace

DatasetSummary summarize(const MeasureFile& file, std::string name) {
  DatasetSummary s;
  s.name = std::move(name);
  s.params_hash = file.header.params_hash;
  s.model_id = file.header.model_id;
  s.n_images = file.records.size();
  if (file.records.empty()) return s;
  std::vector<double> c, v;
  for (const auto& r : file.records) {
    c.push_back(r.complexity);
    v.push_back(r.vulnerability);
  }
  s.mean_complexity = mean(c);
  s.mean_vulnerability = mean(v);
  if (c.size() >= 2) {
    s.std_complexity = std::sqrt(sample_variance(c));
    s.std_vulnerability = std::sqrt(sample_variance(v));
  }
  try {
    s.mean_asi = anomaly::mean_asi(file.records);
  } catch (const NumericError&) {
    s.mean_asi.reset();
  }
  return s;
}

std::string score_file_json(const ScoreFile& score) {
  const json j{{"format", "anomaly-score"},
               {"tool_version", std::string(kToolVersion)},
               {"value", score.result.value},
               {"mode", std::string(to_string(score.result.mode))},
               {"combine", std::string(to_string(score.result.combine))},
               {"n_real", score.result.n_real},
               {"n_generated", score.result.n_generated},
               {"params_hash", score.params_hash},
               {"model_id", score.model_id},
               {"real", score.real},
               {"generated", score.generated},
               {"dataset", score.dataset}};
  return j.dump(2) + "\n";
}

ScoreFile parse_score_file(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", std::string()) != "anomaly-score") {
      throw InputError("not a score file");
    }
    ScoreFile s;
    s.result.value = j.at("value").get<double>();
    s.result.mode = parse_score_mode(j.at("mode").get<std::string>());
    s.result.combine = parse_ks_combine(j.at("combine").get<std::string>());
    s.result.n_real = j.at("n_real").get<std::size_t>();
    s.result.n_generated = j.at("n_generated").get<std::size_t>();
    s.params_hash = j.at("params_hash").get<std::string>();
    s.model_id = j.at("model_id").get<std::string>();
    s.real = j.value("real", std::string());
    s.generated = j.value("generated", std::string());
    s.dataset = j.value("dataset", std::string());
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed score file: ") + e.what());
  }
}

ScoreFile read_score_file(const fs::path& path) {
  const std::string text = slurp(path);
  return with_context(path.string(), [&] { return parse_score_file(text); });
}

ExternalTable parse_external_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  std::size_t dataset_col = 0;
  ExternalTable table;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (header.empty()) {
      header = std::move(cells);
      const auto it = std::find(header.begin(), header.end(), "dataset");
      if (it == header.end()) throw InputError("csv: missing 'dataset' column");
      dataset_col = static_cast<std::size_t>(it - header.begin());
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != dataset_col) table.columns.push_back(header[i]);
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw InputError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells");
    }
    auto& row = table.rows[cells[dataset_col]];
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == dataset_col || cells[i].empty()) continue;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[i].size() || !std::isfinite(v)) {
        throw InputError("csv line " + std::to_string(line_no) + ": '" + cells[i] +
                         "' is not a number");
      }
      row[header[i]] = v;
    }
  }
  if (header.empty()) throw InputError("csv: empty file");
  return table;
}

ExternalTable read_external_csv(const fs::path& path) {
  const std::string text = slurp(path);
  return with_context(path.string(), [&] { return parse_external_csv(text); });
}

Report build_report(const std::vector<fs::path>& score_files,
                    const std::vector<fs::path>& measure_files,
                    const std::optional<fs::path>& external_csv) {
  if (score_files.empty() && measure_files.empty()) {
    throw InputError("report: no score or measure files");
  }
  Report report;
  report.tool_version = std::string(kToolVersion);
  auto bind = [&](const std::string& hash, const std::string& model, const fs::path& src) {
    if (report.params_hash.empty()) {
      report.params_hash = hash;
      report.model_id = model;
    } else if (hash != report.params_hash || model != report.model_id) {
      throw InputError("report: " + src.string() + " has params_hash " + hash +
                       " / model " + model + ", expected " + report.params_hash + " / " +
                       report.model_id);
    }
  };

  for (const auto& p : measure_files) {
    const MeasureFile m = read_measure_file(p);
    bind(m.header.params_hash, m.header.model_id, p);
    report.datasets.push_back(summarize(m, p.stem().string()));
  }
  for (const auto& p : score_files) {
    ScoreFile s = read_score_file(p);
    bind(s.params_hash, s.model_id, p);
    if (s.dataset.empty()) s.dataset = p.stem().string();
    for (auto& d : report.datasets) {
      if (d.name == s.dataset) d.anomaly_score[std::string(to_string(s.result.mode))] = s.result.value;
    }
    report.scores.push_back(std::move(s));
  }
  std::stable_sort(report.scores.begin(), report.scores.end(),
                   [](const ScoreFile& a, const ScoreFile& b) {
                     return std::pair(a.dataset, a.result.mode) < std::pair(b.dataset, b.result.mode);
                   });

  if (external_csv) {
    const ExternalTable table = read_external_csv(*external_csv);
    std::vector<ScoreMode> modes;
    for (const auto& s : report.scores) {
      if (std::find(modes.begin(), modes.end(), s.result.mode) == modes.end()) {
        modes.push_back(s.result.mode);
      }
    }
    std::sort(modes.begin(), modes.end());
    for (const ScoreMode mode : modes) {
      for (const auto& col : table.columns) {
        std::vector<double> as, ext;
        for (const auto& s : report.scores) {
          if (s.result.mode != mode) continue;
          const auto row = table.rows.find(s.dataset);
          if (row == table.rows.end()) continue;
          const auto cell = row->second.find(col);
          if (cell == row->second.end()) continue;
          as.push_back(s.result.value);
          ext.push_back(cell->second);
        }
        Correlation c;
        c.column = col;
        c.mode = std::string(to_string(mode));
        c.n = as.size();
        if (as.size() >= 2) {
          try {
            c.pearson = pearson(as, ext);
            c.spearman = spearman(as, ext);
          } catch (const Error&) {
            // Undefined for constant columns; reported as null.
          }
        }
        report.correlations.push_back(std::move(c));
      }
    }
  }
  return report;
}

std::string report_json(const Report& report) {
  json datasets = json::array();
  for (const auto& d : report.datasets) {
    json as = json::object();
    for (const auto& [mode, v] : d.anomaly_score) as[mode] = v;
    datasets.push_back({{"name", d.name},
                        {"params_hash", d.params_hash},
                        {"model_id", d.model_id},
                        {"n_images", d.n_images},
                        {"mean_complexity", d.mean_complexity},
                        {"std_complexity", d.std_complexity},
                        {"mean_vulnerability", d.mean_vulnerability},
                        {"std_vulnerability", d.std_vulnerability},
                        {"mean_asi", nullable(d.mean_asi)},
                        {"anomaly_score", as}});
  }
  json scores = json::array();
  for (const auto& s : report.scores) {
    scores.push_back({{"dataset", s.dataset},
                      {"value", s.result.value},
                      {"mode", std::string(to_string(s.result.mode))},
                      {"combine", std::string(to_string(s.result.combine))},
                      {"n_real", s.result.n_real},
                      {"n_generated", s.result.n_generated},
                      {"real", s.real},
                      {"generated", s.generated}});
  }
  json corr = json::array();
  for (const auto& c : report.correlations) {
    corr.push_back({{"column", c.column},
                    {"mode", c.mode},
                    {"n", c.n},
                    {"pearson", nullable(c.pearson)},
                    {"spearman", nullable(c.spearman)}});
  }
  const json j{{"format", "anomaly-report"},
               {"tool_version", report.tool_version},
               {"params_hash", report.params_hash},
               {"model_id", report.model_id},
               {"t_test", "welch"},
               {"datasets", datasets},
               {"scores", scores},
               {"correlations", corr}};
  return j.dump(2) + "\n";
}

std::vector<DatasetSummary> parse_report_datasets(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    std::vector<DatasetSummary> out;
    for (const auto& d : j.at("datasets")) {
      DatasetSummary s;
      s.name = d.at("name").get<std::string>();
      s.params_hash = d.at("params_hash").get<std::string>();
      s.model_id = d.at("model_id").get<std::string>();
      s.n_images = d.at("n_images").get<std::size_t>();
      s.mean_complexity = d.at("mean_complexity").get<double>();
      s.std_complexity = d.at("std_complexity").get<double>();
      s.mean_vulnerability = d.at("mean_vulnerability").get<double>();
      s.std_vulnerability = d.at("std_vulnerability").get<double>();
      s.mean_asi = nullable(d.at("mean_asi"));
      for (const auto& [mode, v] : d.at("anomaly_score").items()) {
        s.anomaly_score[mode] = v.get<double>();
      }
      out.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string report_markdown(const Report& report) {
  std::ostringstream o;
  o << "# Measurement report\n\n";
  o << "- tool version: " << report.tool_version << "\n";
  o << "- params_hash: `" << report.params_hash << "`\n";
  o << "- model: `" << report.model_id << "`\n";
  o << "- t-test: Welch\n\n";
  if (!report.datasets.empty()) {
    o << "## Datasets\n\n";
    o << "| dataset | n | mean C | std C | mean V | std V | mean AS-i | AS (2d) |\n";
    o << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& d : report.datasets) {
      const auto as = d.anomaly_score.find("2d");
      o << "| " << d.name << " | " << d.n_images << " | " << fmt(d.mean_complexity) << " | "
        << fmt(d.std_complexity) << " | " << fmt(d.mean_vulnerability) << " | "
        << fmt(d.std_vulnerability) << " | " << fmt(d.mean_asi) << " | "
        << (as == d.anomaly_score.end() ? std::string("n/a") : fmt(as->second)) << " |\n";
    }
    o << "\n";
  }
  if (!report.scores.empty()) {
    o << "## Scores\n\n| dataset | mode | combine | AS | n_real | n_generated |\n";
    o << "|---|---|---|---|---|---|\n";
    for (const auto& s : report.scores) {
      o << "| " << s.dataset << " | " << to_string(s.result.mode) << " | "
        << to_string(s.result.combine) << " | " << fmt(s.result.value) << " | "
        << s.result.n_real << " | " << s.result.n_generated << " |\n";
    }
    o << "\n";
  }
  if (!report.correlations.empty()) {
    o << "## Correlation with external columns\n\n| column | AS mode | n | PCC | SRCC |\n";
    o << "|---|---|---|---|---|\n";
    for (const auto& c : report.correlations) {
      o << "| " << c.column << " | " << c.mode << " | " << c.n << " | " << fmt(c.pearson)
        << " | " << fmt(c.spearman) << " |\n";
    }
    o << "\n";
  }
  return o.str();
}

std::string cdf_svg(const std::vector<std::pair<std::string, std::vector<double>>>& series,
                    std::string_view x_label) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& [_, v] : series) {
    for (const double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  pad_range(lo, hi);
  const Frame f{lo, hi, 0.0, 1.0};
  std::ostringstream o;
  o << svg_open() << svg_axes(f, x_label, "CDF");
  for (std::size_t s = 0; s < series.size(); ++s) {
    std::vector<double> v = series[s].second;
    std::sort(v.begin(), v.end());
    const char* colour = kPalette[s % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    o << f.px(lo) << ',' << f.py(0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double before = static_cast<double>(i) / v.size();
      const double after = static_cast<double>(i + 1) / v.size();
      o << ' ' << f.px(v[i]) << ',' << f.py(before) << ' ' << f.px(v[i]) << ',' << f.py(after);
    }
    o << ' ' << f.px(hi) << ',' << f.py(1.0) << "\"/>\n";
    o << "<text x=\"" << Frame::kLeft + 10 << "\" y=\"" << Frame::kTop + 14 + 16 * s
      << "\" font-size=\"12\" fill=\"" << colour << "\">" << xml_escape(series[s].first)
      << " (n=" << v.size() << ")</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string scatter_svg(const std::vector<std::pair<double, double>>& points,
                        const std::vector<std::string>& labels, std::string_view x_label,
                        std::string_view y_label, std::string_view annotation) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [x, y] : points) {
    x0 = std::min(x0, x), x1 = std::max(x1, x);
    y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (points.empty()) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  pad_range(x0, x1);
  pad_range(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::ostringstream o;
  o << svg_open() << svg_axes(f, x_label, y_label);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double cx = f.px(points[i].first), cy = f.py(points[i].second);
    o << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"" << kPalette[0]
      << "\"/>\n";
    if (i < labels.size()) {
      o << "<text x=\"" << cx + 6 << "\" y=\"" << cy - 6 << "\" font-size=\"10\">"
        << xml_escape(labels[i]) << "</text>\n";
    }
  }
  o << "<text x=\"" << Frame::kW - Frame::kRight << "\" y=\"" << Frame::kTop - 10
    << "\" font-size=\"12\" text-anchor=\"end\">" << xml_escape(annotation) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

void write_report(const fs::path& out_dir, const std::vector<fs::path>& score_files,
                  const std::vector<fs::path>& measure_files,
                  const std::optional<fs::path>& external_csv) {
  const Report report = build_report(score_files, measure_files, external_csv);
  fs::create_directories(out_dir);
  spit(out_dir / "summary.json", report_json(report));
  spit(out_dir / "summary.md", report_markdown(report));

  std::vector<std::pair<std::string, std::vector<double>>> cs, vs;
  for (const auto& p : measure_files) {
    const MeasureFile m = read_measure_file(p);
    std::vector<double> c, v;
    for (const auto& r : m.records) {
      c.push_back(r.complexity);
      v.push_back(r.vulnerability);
    }
    cs.emplace_back(p.stem().string(), std::move(c));
    vs.emplace_back(p.stem().string(), std::move(v));
  }
  spit(out_dir / "cdf_complexity.svg", cdf_svg(cs, "complexity (rad)"));
  spit(out_dir / "cdf_vulnerability.svg", cdf_svg(vs, "vulnerability"));

  if (!external_csv) return;
  const ExternalTable table = read_external_csv(*external_csv);
  if (std::find(table.columns.begin(), table.columns.end(), "human_error_rate") ==
      table.columns.end()) {
    return;
  }
  std::vector<std::pair<double, double>> points;
  std::vector<std::string> labels;
  for (const auto& s : report.scores) {
    if (s.result.mode != ScoreMode::k2d) continue;
    const auto row = table.rows.find(s.dataset);
    if (row == table.rows.end()) continue;
    const auto cell = row->second.find("human_error_rate");
    if (cell == row->second.end()) continue;
    points.emplace_back(cell->second, s.result.value);
    labels.push_back(s.dataset);
  }
  std::string note;
  for (const auto& c : report.correlations) {
    if (c.column == "human_error_rate" && c.mode == "2d") {
      note = "PCC " + fmt(c.pearson) + ", SRCC " + fmt(c.spearman) + ", n=" +
             std::to_string(c.n);
    }
  }
  spit(out_dir / "as_vs_human.svg",
       scatter_svg(points, labels, "human error rate", "anomaly score", note));
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  const fs::path p(pattern);
  const std::string leaf = p.filename().string();
  if (leaf.find_first_of("*?") == std::string::npos) {
    if (!fs::exists(p)) throw InputError("no such file: " + pattern);
    return {p};
  }
  std::string re;
  for (const char c : leaf) {
    if (c == '*') {
      re += ".*";
    } else if (c == '?') {
      re += '.';
    } else if (std::string_view("\\^$.|+()[]{}").find(c) != std::string_view::npos) {
      re += '\\';
      re += c;
    } else {
      re += c;
    }
  }
  const std::regex rx(re);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::vector<fs::path> out;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && std::regex_match(e.path().filename().string(), rx)) {
        out.push_back(e.path());
      }
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw InputError("pattern matched no files: " + pattern);
  return out;
}

}  // namespace anomaly::harness
