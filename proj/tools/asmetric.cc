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

// asmetric: command-line front end for measuring, scoring and reporting.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "anomaly/attribution.h"
#include "anomaly/errors.h"
#include "anomaly/hashing.h"
#include "anomaly/model_config.h"
#include "anomaly/random.h"
#include "anomaly/scores.h"
#include "anomaly/harness/corruption.h"
#include "anomaly/harness/image_io.h"
#include "anomaly/harness/measure.h"
#include "anomaly/harness/measure_file.h"
#include "anomaly/harness/overlay.h"
#include "anomaly/harness/report.h"
#include "anomaly/harness/run_config.h"

namespace fs = std::filesystem;
using namespace anomaly;
using namespace anomaly::harness;

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

struct MeasureArgs {
  std::string images, model, config, out = "measures.jsonl", cache_dir;
  std::optional<double> epsilon, alpha, delta;
  std::optional<int> k, j;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

int run_measure(const MeasureArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) cfg = load_run_config(a.config);
  if (!a.model.empty()) cfg.model = load_model_config(a.model);
  if (a.epsilon) cfg.trajectory.epsilon = *a.epsilon;
  if (a.k) cfg.trajectory.steps = *a.k;
  if (a.alpha) cfg.attack.alpha = *a.alpha;
  if (a.delta) cfg.attack.delta = *a.delta;
  if (a.j) cfg.attack.steps = *a.j;
  if (a.seed) cfg.global_seed = *a.seed;
  if (a.workers > 0) cfg.workers = a.workers;
  if (!a.cache_dir.empty()) cfg.cache_dir = a.cache_dir;
  fs::path dir = a.images.empty() ? cfg.real_dir : fs::path(a.images);
  if (dir.empty()) throw InputError("measure: --images is required");
  cfg.trajectory.validate();

  const auto model = build_model(cfg.model);
  MeasureStats stats;
  const MeasureFile file = measure_directory(cfg, *model, dir, &stats);
  write_measure_file(a.out, file);
  std::fprintf(stderr, "measured %zu images (%zu cached), params_hash %s -> %s\n",
               file.records.size(), stats.cache_hits, file.header.params_hash.c_str(),
               a.out.c_str());
  for (const auto& s : file.header.skipped) {
    std::fprintf(stderr, "skipped %s: %s\n", s.image_id.c_str(), s.reason.c_str());
  }
  return file.header.skipped.empty() ? 0 : 1;
}

struct ScoreArgs {
  std::string real, gen, mode = "2d", combine = "average", out, dataset;
};

int run_score(const ScoreArgs& a) {
  const MeasureFile real = read_measure_file(a.real);
  const MeasureFile gen = read_measure_file(a.gen);
  ScoreFile s;
  s.result = anomaly_score(real.records, gen.records, parse_score_mode(a.mode),
                           parse_ks_combine(a.combine));
  s.params_hash = real.header.params_hash;
  s.model_id = real.header.model_id;
  s.real = a.real;
  s.generated = a.gen;
  s.dataset = a.dataset.empty() ? fs::path(a.gen).stem().string() : a.dataset;
  write_text(a.out, score_file_json(s));
  if (!a.out.empty() && a.out != "-") {
    std::printf("%s\n", format_double(s.result.value).c_str());
  }
  return 0;
}

int run_score_i(const std::string& measures, bool mean_only) {
  const MeasureFile m = read_measure_file(measures);
  if (mean_only) {
    std::printf("%s\n", format_double(mean_asi(m.records)).c_str());
    return 0;
  }
  std::printf("image_id,complexity,vulnerability,asi\n");
  for (const auto& r : m.records) {
    std::printf("%s,%s,%s,%s\n", r.image_id.c_str(), format_double(r.complexity).c_str(),
                format_double(r.vulnerability).c_str(), format_double(asi(r)).c_str());
  }
  return 0;
}

struct AttributeArgs {
  std::string image, model, out = "attribution";
  int segments = 20, trials = 20, min_sel = 3, max_sel = 6;
  double alpha = 0.01, delta = 1e-6;
  int j = 10;
  std::uint64_t seed = 0;
};

int run_attribute(const AttributeArgs& a) {
  const ModelConfig mc = load_model_config(a.model);
  const auto model = build_model(mc);
  const fs::path path(a.image);
  const ImageTensor x = load_image(path, path.filename().string());
  const Segmentation seg = segment(x, a.segments);
  AttackConfig cfg;
  cfg.alpha = a.alpha;
  cfg.delta = a.delta;
  cfg.steps = a.j;
  const std::string material = seed_material(a.seed, x.id(), "attribution");
  const AttributionMap map =
      attribute(*model, x, seg, cfg, a.trials, a.min_sel, a.max_sel, material);
  if (map.underdetermined) {
    std::fprintf(stderr,
                 "warning: %d trials for %d super-pixels plus intercept is underdetermined "
                 "(rank %d); coefficients are the minimum-norm solution\n",
                 map.trials, seg.count, map.rank);
  }
  if (map.degenerate_fit) {
    std::fprintf(stderr, "warning: all responses identical; coefficients set to zero\n");
  }
  write_attribution(a.out, path.stem().string(), x, seg, map, cfg, model->model_id(),
                    a.min_sel, a.max_sel);
  return 0;
}

int run_bench(const std::string& config, const std::string& out, int workers) {
  CorruptionBenchConfig cfg = load_corruption_config(config);
  if (workers > 0) cfg.run.workers = workers;
  const CorruptionReport r = run_corruption_benchmark(cfg);
  write_text(out, corruption_report_json(r));
  std::fprintf(stderr,
               "%zu seeds, %d images: AS strictly increasing for %.0f%% of seeds; worst "
               "vulnerability p %.3g; worst AS-i p %.3g; mean AS-i/level Spearman %.3f "
               "(%.1f s)\n",
               r.seeds.size(), r.n_images, 100.0 * r.monotone_fraction,
               r.max_vulnerability_p, r.max_asi_p, r.mean_asi_spearman, r.seconds);
  return 0;
}

int run_report(const std::vector<std::string>& score_globs,
               const std::vector<std::string>& measure_globs, const std::string& human,
               const std::string& out) {
  std::vector<fs::path> scores, measures;
  for (const auto& g : score_globs) {
    for (auto& p : expand_glob(g)) scores.push_back(std::move(p));
  }
  for (const auto& g : measure_globs) {
    for (auto& p : expand_glob(g)) measures.push_back(std::move(p));
  }
  std::optional<fs::path> csv;
  if (!human.empty()) csv = human;
  write_report(out, scores, measures, csv);
  std::fprintf(stderr, "report written to %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complexity/vulnerability measurement and anomaly scoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Measure C and V for every image in a directory");
  measure->add_option("--images", ma.images, "Image directory (PNG/JPEG, recursive)");
  measure->add_option("--model", ma.model, "Model config JSON");
  measure->add_option("--config", ma.config, "Run config JSON; flags override it");
  measure->add_option("--epsilon", ma.epsilon, "Trajectory step size");
  measure->add_option("--K", ma.k, "Trajectory steps");
  measure->add_option("--alpha", ma.alpha, "Attack step size");
  measure->add_option("--delta", ma.delta, "Attack start offset");
  measure->add_option("--J", ma.j, "Attack steps");
  measure->add_option("--seed", ma.seed, "Global seed");
  measure->add_option("--workers", ma.workers, "Worker threads");
  measure->add_option("--cache-dir", ma.cache_dir,
                      std::string("Per-image cache (default: $") + kCacheDirEnv + ")");
  measure->add_option("--out", ma.out, "Output measure file");

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Anomaly score between two measure files");
  score->add_option("--real", sa.real, "Reference measure file")->required();
  score->add_option("--gen", sa.gen, "Generated measure file")->required();
  score->add_option("--mode", sa.mode, "2d|complexity|vulnerability");
  score->add_option("--combine", sa.combine, "average|max");
  score->add_option("--dataset", sa.dataset, "Dataset key for reports");
  score->add_option("--out", sa.out, "Score JSON (default: stdout)");

  std::string si_measures;
  bool si_mean = false;
  auto* score_i = app.add_subcommand("score-i", "Per-image V/C ratios");
  score_i->add_option("--measures", si_measures, "Measure file")->required();
  score_i->add_flag("--mean", si_mean, "Print only the mean");

  AttributeArgs aa;
  auto* attr = app.add_subcommand("attribute", "Super-pixel contribution map for one image");
  attr->add_option("--image", aa.image, "Image file")->required();
  attr->add_option("--model", aa.model, "Model config JSON")->required();
  attr->add_option("--segments", aa.segments, "Number of super-pixels");
  attr->add_option("--trials", aa.trials, "Masked attacks");
  attr->add_option("--min-sel", aa.min_sel, "Fewest super-pixels per trial");
  attr->add_option("--max-sel", aa.max_sel, "Most super-pixels per trial");
  attr->add_option("--alpha", aa.alpha, "Attack step size");
  attr->add_option("--delta", aa.delta, "Attack start offset");
  attr->add_option("--J", aa.j, "Attack steps");
  attr->add_option("--seed", aa.seed, "Global seed");
  attr->add_option("--out", aa.out, "Output directory");

  std::string bench_config, bench_out;
  int bench_workers = 0;
  auto* bench = app.add_subcommand("bench-corruption", "Synthetic corruption benchmark");
  bench->add_option("--config", bench_config, "Benchmark config JSON")->required();
  bench->add_option("--out", bench_out, "Report JSON (default: stdout)");
  bench->add_option("--workers", bench_workers, "Worker threads");

  std::vector<std::string> rep_scores, rep_measures;
  std::string rep_human, rep_out = "report";
  auto* rep = app.add_subcommand("report", "Summary tables, CDF plots and correlations");
  rep->add_option("--scores", rep_scores, "Score files or patterns");
  rep->add_option("--measures", rep_measures, "Measure files or patterns");
  rep->add_option("--human", rep_human, "CSV with dataset and numeric columns");
  rep->add_option("--out", rep_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*measure) return run_measure(ma);
    if (*score) return run_score(sa);
    if (*score_i) return run_score_i(si_measures, si_mean);
    if (*attr) return run_attribute(aa);
    if (*bench) return run_bench(bench_config, bench_out, bench_workers);
    if (*rep) return run_report(rep_scores, rep_measures, rep_human, rep_out);
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 2;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
