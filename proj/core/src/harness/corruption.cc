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

#include "anomaly/harness/corruption.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "anomaly/errors.h"
#include "anomaly/random.h"
#include "anomaly/scores.h"
#include "anomaly/stats.h"
#include "anomaly/harness/measure.h"

namespace anomaly::harness {

using nlohmann::json;

namespace {

std::string image_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img%04d", i);
  return buf;
}

double mean_of(const std::vector<MeasureRecord>& recs, double MeasureRecord::*field) {
  double s = 0.0;
  for (const auto& r : recs) s += r.*field;
  return s / static_cast<double>(recs.size());
}

std::vector<double> column(const std::vector<MeasureRecord>& recs,
                           double MeasureRecord::*field) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(r.*field);
  return out;
}

std::vector<double> asi_column(const std::vector<MeasureRecord>& recs) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(asi(r));
  return out;
}

json ttest_json(const TTestResult& t) {
  return {{"t", t.t_statistic},
          {"df", t.degrees_of_freedom},
          {"p", t.p_value},
          {"tail", std::string(to_string(t.tail))},
          {"test", t.pooled ? "student_pooled" : "welch"}};
}

}  // namespace

ImageTensor procedural_image(std::string id, Shape shape, std::string_view material) {
  RandomStream rng(CounterRng::from_material(material));
  const int h = shape.height, w = shape.width, ch = shape.channels;
  std::vector<double> px(shape.size());

  std::vector<double> c0(ch), c1(ch);
  for (int c = 0; c < ch; ++c) {
    c0[c] = 0.15 + 0.7 * rng.uniform();
    c1[c] = 0.15 + 0.7 * rng.uniform();
  }
  const double angle = 2.0 * M_PI * rng.uniform();
  const double gx = std::cos(angle), gy = std::sin(angle);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = ((x + 0.5) / w - 0.5) * gx + ((y + 0.5) / h - 0.5) * gy;
      const double t = std::clamp(u + 0.5, 0.0, 1.0);
      for (int c = 0; c < ch; ++c) {
        px[pixel_index(shape, y, x, c)] = (1.0 - t) * c0[c] + t * c1[c];
      }
    }
  }

  const int n_shapes = static_cast<int>(rng.uniform_int(3, 6));
  std::vector<double> colour(ch);
  for (int s = 0; s < n_shapes; ++s) {
    for (int c = 0; c < ch; ++c) colour[c] = rng.uniform();
    const bool disc = rng.uniform() < 0.5;
    const double cx = rng.uniform() * w, cy = rng.uniform() * h;
    const double rx = (0.08 + 0.22 * rng.uniform()) * w;
    const double ry = disc ? rx : (0.08 + 0.22 * rng.uniform()) * h;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
        const bool inside = disc ? dx * dx + dy * dy <= 1.0
                                 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
        if (!inside) continue;
        for (int c = 0; c < ch; ++c) px[pixel_index(shape, y, x, c)] = colour[c];
      }
    }
  }
  return ImageTensor(std::move(id), shape, std::move(px));
}

ImageTensor box_blur(const ImageTensor& x, int radius) {
  if (radius < 0) throw InputError("blur radius must be >= 0");
  const Shape& s = x.shape();
  std::vector<double> out(s.size());
  for (int y = 0; y < s.height; ++y) {
    for (int xx = 0; xx < s.width; ++xx) {
      for (int c = 0; c < s.channels; ++c) {
        double sum = 0.0;
        int n = 0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= s.height) continue;
          for (int dx = -radius; dx <= radius; ++dx) {
            const int xs = xx + dx;
            if (xs < 0 || xs >= s.width) continue;
            sum += x.at(yy, xs, c);
            ++n;
          }
        }
        out[pixel_index(s, y, xx, c)] = sum / n;
      }
    }
  }
  return ImageTensor::clipped(x.id(), s, std::move(out));
}

ImageTensor corrupt(const ImageTensor& x, double level, const CorruptionOptions& options,
                    std::string_view material) {
  if (!(level >= 0.0 && level <= 1.0)) throw InputError("corruption level must be in [0, 1]");
  if (level == 0.0) return x;
  const ImageTensor blurred = box_blur(x, options.blur_radius);
  RandomStream rng(CounterRng::from_material(material));
  const auto src = x.pixels();
  const auto blr = blurred.pixels();
  std::vector<double> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    out[i] = (1.0 - level) * src[i] + level * blr[i] +
             level * options.noise_sigma * rng.normal();
  }
  return ImageTensor::clipped(x.id(), x.shape(), std::move(out));
}

CorruptionBenchConfig parse_corruption_config(std::string_view json_text,
                                              const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("benchmark config: ") + e.what());
  }
  CorruptionBenchConfig cfg;
  try {
    cfg.run = parse_run_config(json_text, base_dir);
    if (j.contains("seeds")) {
      cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    } else {
      const int n = j.value("n_seeds", 20);
      const std::uint64_t first = j.value("first_seed", std::uint64_t{1});
      for (int i = 0; i < n; ++i) cfg.seeds.push_back(first + i);
    }
    cfg.n_images = j.value("n_images", cfg.n_images);
    if (j.contains("levels")) cfg.levels = j["levels"].get<std::vector<double>>();
    const std::string test = j.value("t_test", std::string("welch"));
    if (test != "welch" && test != "student") {
      throw InputError("benchmark config: t_test must be 'welch' or 'student'");
    }
    cfg.pooled_ttest = test == "student";
    if (j.contains("corruption")) {
      const json& c = j["corruption"];
      cfg.corruption.blur_radius = c.value("blur_radius", cfg.corruption.blur_radius);
      cfg.corruption.noise_sigma = c.value("noise_sigma", cfg.corruption.noise_sigma);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("benchmark config: ") + e.what());
  }
  if (cfg.seeds.empty()) throw InputError("benchmark config: no seeds");
  if (cfg.n_images < 2) throw InputError("benchmark config: n_images must be >= 2");
  if (cfg.levels.empty()) throw InputError("benchmark config: no corruption levels");
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    const double l = cfg.levels[i];
    if (!(l > 0.0 && l <= 1.0) || (i > 0 && l <= cfg.levels[i - 1])) {
      throw InputError("benchmark config: levels must increase strictly within (0, 1]");
    }
  }
  return cfg;
}

CorruptionBenchConfig load_corruption_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read benchmark config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return with_context(path.string(), [&] {
    return parse_corruption_config(ss.str(), path.parent_path());
  });
}

CorruptionReport run_corruption_benchmark(const CorruptionBenchConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = build_model(cfg.run.model);
  const Shape shape = cfg.run.model.input_shape;

  CorruptionReport report;
  report.model_id = model->model_id();
  report.params_hash = params_hash(cfg.run);
  report.combine = cfg.run.ks_combination;
  report.n_images = cfg.n_images;

  std::vector<double> level_axis{0.0};
  level_axis.insert(level_axis.end(), cfg.levels.begin(), cfg.levels.end());

  for (const std::uint64_t seed : cfg.seeds) {
    RunConfig run = cfg.run;
    run.global_seed = seed;
    std::vector<ImageTensor> clean;
    clean.reserve(cfg.n_images);
    for (int i = 0; i < cfg.n_images; ++i) {
      const std::string id = image_name(i);
      clean.push_back(procedural_image(id, shape, seed_material(seed, id, "scene")));
    }
    const MeasureFile clean_m = measure_images(run, *model, clean);

    SeedResult sr;
    sr.seed = seed;
    std::vector<MeasureRecord> top;
    for (const double level : level_axis) {
      MeasureFile m;
      if (level == 0.0) {
        m = clean_m;
      } else {
        std::vector<ImageTensor> bad;
        bad.reserve(clean.size());
        for (const auto& img : clean) {
          bad.push_back(corrupt(img, level, cfg.corruption,
                                seed_material(seed, img.id(), "corruption")));
        }
        m = measure_images(run, *model, bad);
      }
      LevelResult lr;
      lr.level = level;
      lr.anomaly_score = anomaly_score(clean_m.records, m.records, ScoreMode::k2d,
                                        cfg.run.ks_combination)
                              .value;
      lr.mean_complexity = mean_of(m.records, &MeasureRecord::complexity);
      lr.mean_vulnerability = mean_of(m.records, &MeasureRecord::vulnerability);
      lr.mean_asi = mean_asi(m.records);
      sr.levels.push_back(lr);
      top = std::move(m.records);
    }

    sr.strictly_increasing = true;
    std::vector<double> as_vals, asi_vals;
    for (std::size_t i = 0; i < sr.levels.size(); ++i) {
      as_vals.push_back(sr.levels[i].anomaly_score);
      asi_vals.push_back(sr.levels[i].mean_asi);
      if (i > 0 && !(sr.levels[i].anomaly_score > sr.levels[i - 1].anomaly_score)) {
        sr.strictly_increasing = false;
      }
    }
    const auto ttest = cfg.pooled_ttest ? student_ttest : welch_ttest;
    sr.vulnerability_test =
        ttest(column(top, &MeasureRecord::vulnerability),
              column(clean_m.records, &MeasureRecord::vulnerability), Tail::kGreater);
    sr.asi_test = ttest(asi_column(top), asi_column(clean_m.records), Tail::kGreater);
    sr.asi_level_spearman = spearman(level_axis, asi_vals);
    sr.as_level_spearman = spearman(level_axis, as_vals);
    report.seeds.push_back(std::move(sr));
  }

  int monotone = 0;
  for (const auto& s : report.seeds) {
    monotone += s.strictly_increasing ? 1 : 0;
    report.max_vulnerability_p = std::max(report.max_vulnerability_p, s.vulnerability_test.p_value);
    report.max_asi_p = std::max(report.max_asi_p, s.asi_test.p_value);
    report.mean_asi_spearman += s.asi_level_spearman;
    report.mean_as_spearman += s.as_level_spearman;
  }
  const double n = static_cast<double>(report.seeds.size());
  report.monotone_fraction = monotone / n;
  report.mean_asi_spearman /= n;
  report.mean_as_spearman /= n;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string corruption_report_json(const CorruptionReport& report) {
  json seeds = json::array();
  for (const auto& s : report.seeds) {
    json levels = json::array();
    for (const auto& l : s.levels) {
      levels.push_back({{"level", l.level},
                        {"anomaly_score", l.anomaly_score},
                        {"mean_complexity", l.mean_complexity},
                        {"mean_vulnerability", l.mean_vulnerability},
                        {"mean_asi", l.mean_asi}});
    }
    seeds.push_back({{"seed", s.seed},
                     {"levels", levels},
                     {"strictly_increasing", s.strictly_increasing},
                     {"vulnerability_test", ttest_json(s.vulnerability_test)},
                     {"asi_test", ttest_json(s.asi_test)},
                     {"asi_level_spearman", s.asi_level_spearman},
                     {"as_level_spearman", s.as_level_spearman}});
  }
  const json j{{"format", "anomaly-corruption-bench"},
               {"tool_version", std::string(kToolVersion)},
               {"model_id", report.model_id},
               {"params_hash", report.params_hash},
               {"n_images", report.n_images},
               {"ks_combination", std::string(to_string(report.combine))},
               {"monotone_fraction", report.monotone_fraction},
               {"max_vulnerability_p", report.max_vulnerability_p},
               {"max_asi_p", report.max_asi_p},
               {"mean_asi_spearman", report.mean_asi_spearman},
               {"mean_as_spearman", report.mean_as_spearman},
               {"seeds", seeds}};
  return j.dump(2) + "\n";
}

}  // namespace anomaly::harness
