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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "anomaly/attribution.h"
#include "anomaly/errors.h"
#include "anomaly/model_config.h"
#include "anomaly/scores.h"
#include "anomaly/stats.h"
#include "anomaly/toy_models.h"
#include "anomaly/harness/corruption.h"
#include "anomaly/harness/dataset.h"
#include "anomaly/harness/image_io.h"
#include "anomaly/harness/measure.h"
#include "anomaly/harness/measure_file.h"
#include "anomaly/harness/overlay.h"
#include "anomaly/harness/report.h"
#include "anomaly/harness/run_config.h"
#include "support/fixtures.h"

namespace anomaly::harness {
namespace {

namespace fs = std::filesystem;

RunConfig small_config() {
  RunConfig cfg;
  cfg.global_seed = 11;
  cfg.model.kind = ModelKind::kToyNonlinear;
  cfg.model.seed = 5;
  cfg.model.feature_dim = 8;
  cfg.model.input_shape = {12, 12, 3};
  return cfg;
}

std::vector<ImageTensor> scene_set(int n, const Shape& shape, const std::string& tag) {
  std::vector<ImageTensor> out;
  for (int i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "%s_%03d.png", tag.c_str(), i);
    out.push_back(procedural_image(id, shape, tag + std::to_string(i)));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

TEST(MeasureFileTest, RoundTripsAndIsByteStable) {
  const RunConfig cfg = small_config();
  const auto model = build_model(cfg.model);
  const auto images = scene_set(6, cfg.model.input_shape, "rt");
  const MeasureFile file = measure_images(cfg, *model, images);
  ASSERT_EQ(file.records.size(), 6u);
  EXPECT_EQ(file.header.n_records, 6u);
  EXPECT_EQ(file.header.model_id, model->model_id());
  EXPECT_EQ(file.header.params_hash, params_hash(cfg));
  EXPECT_EQ(file.header.pixel_convention, kPixelConvention);

  const std::string text = serialize_measure_file(file);
  const MeasureFile back = parse_measure_file(text);
  ASSERT_EQ(back.records.size(), file.records.size());
  for (std::size_t i = 0; i < file.records.size(); ++i) {
    const auto& a = file.records[i];
    const auto& b = back.records[i];
    EXPECT_EQ(a.image_id, b.image_id);
    EXPECT_EQ(a.complexity, b.complexity);  // exact: doubles are written round-trip
    EXPECT_EQ(a.vulnerability, b.vulnerability);
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.skipped_terms, b.skipped_terms);
    EXPECT_EQ(a.attack_terminated_early, b.attack_terminated_early);
  }
  EXPECT_EQ(serialize_measure_file(back), text);
  EXPECT_TRUE(std::is_sorted(file.records.begin(), file.records.end(),
                             [](const auto& l, const auto& r) { return l.image_id < r.image_id; }));
}

TEST(MeasureFileTest, RejectsMalformedInput) {
  const RunConfig cfg = small_config();
  const auto model = build_model(cfg.model);
  const auto images = scene_set(3, cfg.model.input_shape, "bad");
  const std::string text = serialize_measure_file(measure_images(cfg, *model, images));
  EXPECT_THROW(parse_measure_file(""), InputError);
  EXPECT_THROW(parse_measure_file("{\"format\":\"other\"}\n"), InputError);

  // Drop the last record: the header count no longer matches.
  std::string truncated = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  EXPECT_THROW(parse_measure_file(truncated), InputError);

  std::string garbled = text;
  garbled.insert(text.find('\n') + 1, "{not json\n");
  try {
    parse_measure_file(garbled);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }

  auto swapped = parse_measure_file(text);
  swapped.records[1].params_hash = "deadbeef";
  EXPECT_THROW(parse_measure_file(serialize_measure_file(swapped)), InputError);
}

TEST(MeasureTest, IndependentOfWorkerCountAndRerun) {
  RunConfig cfg = small_config();
  const auto model = build_model(cfg.model);
  const auto images = scene_set(64, cfg.model.input_shape, "w");
  cfg.workers = 1;
  const std::string one = serialize_measure_file(measure_images(cfg, *model, images));
  const std::string again = serialize_measure_file(measure_images(cfg, *model, images));
  cfg.workers = 8;
  const std::string eight = serialize_measure_file(measure_images(cfg, *model, images));
  EXPECT_EQ(one, again);
  EXPECT_EQ(one, eight);

  std::vector<ImageTensor> dup{images[0], images[0]};
  EXPECT_THROW(measure_images(cfg, *model, dup), InputError);
}

TEST(MeasureTest, SeedChangesDirectionsButNotModel) {
  RunConfig cfg = small_config();
  const auto model = build_model(cfg.model);
  const auto images = scene_set(4, cfg.model.input_shape, "seed");
  const auto a = measure_images(cfg, *model, images);
  cfg.global_seed = 12;
  const auto b = measure_images(cfg, *model, images);
  EXPECT_NE(a.records[0].complexity, b.records[0].complexity);
  EXPECT_EQ(a.header.params_hash, b.header.params_hash);
  EXPECT_EQ(b.records[0].seed, 12u);
}

TEST(ImageIoTest, PngRoundTripAndBadBytes) {
  const auto dir = fixtures::temp_dir("imageio");
  const auto img = fixtures::random_image("x", {9, 7, 3}, "png", 0.0, 1.0);
  write_png(dir / "x.png", img);
  const auto back = load_image(dir / "x.png", "x");
  ASSERT_EQ(back.shape(), img.shape());
  const auto q = quantize(img);
  for (std::size_t i = 0; i < img.size(); ++i) {
    ASSERT_EQ(back.pixels()[i], q[i] / 255.0);
    ASSERT_LE(std::fabs(back.pixels()[i] - img.pixels()[i]), 0.5 / 255.0 + 1e-12);
  }
  const auto grey = ImageTensor::filled("g", {4, 5, 1}, 0.25);
  write_png(dir / "g.png", grey);
  EXPECT_EQ(load_image(dir / "g.png", "g").shape(), grey.shape());

  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5};
  EXPECT_THROW(decode_image(junk, "junk"), InputError);
  EXPECT_THROW(load_image(dir / "missing.png", "m"), InputError);
}

TEST(DatasetTest, ListsImagesSortedAndRejectsEmpty) {
  const auto dir = fixtures::temp_dir("dataset");
  fs::create_directories(dir / "sub");
  const auto img = ImageTensor::filled("a", {4, 4, 3}, 0.5);
  write_png(dir / "b.png", img);
  write_png(dir / "sub" / "a.PNG", img);
  spit(dir / "notes.txt", "ignore me");
  const auto entries = list_images(dir);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].id, "b.png");
  EXPECT_EQ(entries[1].id, "sub/a.PNG");

  const auto empty = fixtures::temp_dir("dataset_empty");
  try {
    list_images(empty);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("no images"), std::string::npos);
  }
  EXPECT_THROW(list_images(empty / "nope"), InputError);
}

TEST(MeasureDirectoryTest, SkipsBadFilesAndUsesCache) {
  RunConfig cfg = small_config();
  const auto model = build_model(cfg.model);
  const auto dir = fixtures::temp_dir("measure_dir");
  for (const auto& img : scene_set(5, cfg.model.input_shape, "d")) {
    write_png(dir / img.id(), img);
  }
  spit(dir / "broken.png", "not a png");
  write_png(dir / "wrong_shape.png", ImageTensor::filled("w", {5, 5, 3}, 0.5));

  cfg.cache_dir = fixtures::temp_dir("measure_cache");
  MeasureStats first;
  const MeasureFile a = measure_directory(cfg, *model, dir, &first);
  EXPECT_EQ(a.records.size(), 5u);
  ASSERT_EQ(a.header.skipped.size(), 2u);
  EXPECT_EQ(a.header.skipped[0].image_id, "broken.png");
  EXPECT_EQ(a.header.skipped[1].image_id, "wrong_shape.png");
  EXPECT_EQ(first.computed, 5u);
  EXPECT_EQ(first.cache_hits, 0u);
  for (const auto& r : a.records) EXPECT_EQ(r.image_digest.size(), 64u);

  MeasureStats second;
  const MeasureFile b = measure_directory(cfg, *model, dir, &second);
  EXPECT_EQ(second.cache_hits, 5u);
  EXPECT_EQ(second.computed, 0u);
  EXPECT_EQ(serialize_measure_file(a), serialize_measure_file(b));

  // Changing one file invalidates only its entry.
  write_png(dir / "d_002.png", procedural_image("d_002.png", cfg.model.input_shape, "other"));
  MeasureStats third;
  measure_directory(cfg, *model, dir, &third);
  EXPECT_EQ(third.computed, 1u);
  EXPECT_EQ(third.cache_hits, 4u);

  // So do parameter and seed changes.
  cfg.trajectory.steps = 6;
  MeasureStats fourth;
  measure_directory(cfg, *model, dir, &fourth);
  EXPECT_EQ(fourth.computed, 5u);
  cfg.trajectory.steps = 10;
  cfg.global_seed = 99;
  MeasureStats fifth;
  measure_directory(cfg, *model, dir, &fifth);
  EXPECT_EQ(fifth.computed, 5u);

  // A corrupted cache entry is recomputed, not trusted.
  for (const auto& e : fs::directory_iterator(cfg.cache_dir)) spit(e.path(), "{}");
  MeasureStats sixth;
  const MeasureFile c = measure_directory(cfg, *model, dir, &sixth);
  EXPECT_EQ(sixth.computed, 5u);
}

TEST(MeasureDirectoryTest, CacheDirFromEnvironment) {
  RunConfig cfg = small_config();
  const auto model = build_model(cfg.model);
  const auto dir = fixtures::temp_dir("measure_env");
  for (const auto& img : scene_set(2, cfg.model.input_shape, "e")) {
    write_png(dir / img.id(), img);
  }
  const auto cache = fixtures::temp_dir("measure_env_cache");
  ::setenv(kCacheDirEnv, cache.c_str(), 1);
  MeasureStats s1, s2;
  measure_directory(cfg, *model, dir, &s1);
  measure_directory(cfg, *model, dir, &s2);
  ::unsetenv(kCacheDirEnv);
  EXPECT_EQ(s1.computed, 2u);
  EXPECT_EQ(s2.cache_hits, 2u);
}

TEST(MeasureDatasetTest, WritesNamedOutputs) {
  RunConfig cfg = small_config();
  const auto root = fixtures::temp_dir("dataset_roles");
  fs::create_directories(root / "real");
  fs::create_directories(root / "gen");
  for (const auto& img : scene_set(3, cfg.model.input_shape, "r")) write_png(root / "real" / img.id(), img);
  for (const auto& img : scene_set(3, cfg.model.input_shape, "g")) write_png(root / "gen" / img.id(), img);
  cfg.real_dir = root / "real";
  cfg.generated_dir = root / "gen";
  cfg.output_dir = root / "out";
  const auto real = measure_dataset(cfg, DatasetRole::kReal);
  const auto gen = measure_dataset(cfg, DatasetRole::kGenerated);
  EXPECT_EQ(real.filename(), "real.jsonl");
  EXPECT_EQ(gen.filename(), "generated.jsonl");
  EXPECT_EQ(read_measure_file(real).records.size(), 3u);
  cfg.real_dir.clear();
  EXPECT_THROW(measure_dataset(cfg, DatasetRole::kReal), InputError);
}

TEST(RunConfigTest, ParsesAndHashes) {
  const auto cfg = parse_run_config(R"({
    "global_seed": 3,
    "model": {"kind": "affine", "seed": 1, "feature_dim": 4, "input_shape": [8, 8, 3]},
    "trajectory": {"epsilon": 0.02, "K": 7},
    "attack": {"alpha": 0.005, "delta": 1e-5, "J": 4},
    "real": "r", "generated": "/abs/g", "output": "o",
    "ks_combination": "max", "workers": 3
  })", "/base");
  EXPECT_EQ(cfg.global_seed, 3u);
  EXPECT_EQ(cfg.model.kind, ModelKind::kAffine);
  EXPECT_EQ(cfg.trajectory.epsilon, 0.02);
  EXPECT_EQ(cfg.trajectory.steps, 7);
  EXPECT_EQ(cfg.attack.steps, 4);
  EXPECT_EQ(cfg.real_dir, fs::path("/base/r"));
  EXPECT_EQ(cfg.generated_dir, fs::path("/abs/g"));
  EXPECT_EQ(cfg.ks_combination, KsCombine::kMax);
  EXPECT_EQ(cfg.workers, 3);

  EXPECT_THROW(parse_run_config("{"), InputError);
  EXPECT_THROW(parse_run_config(R"({"workers": 0})"), InputError);
  EXPECT_THROW(parse_run_config(R"({"trajectory": {"K": 1}})"), InputError);
  EXPECT_THROW(parse_run_config(R"({"ks_combination": "median"})"), InputError);
}

TEST(RunConfigTest, ParamsHashCoversEveryMeasurementParameter) {
  const RunConfig base = small_config();
  const std::string h = params_hash(base);
  EXPECT_EQ(h, params_hash(base));
  EXPECT_EQ(h.size(), 16u);
  auto differs = [&](auto edit) {
    RunConfig c = base;
    edit(c);
    return params_hash(c) != h;
  };
  EXPECT_TRUE(differs([](RunConfig& c) { c.trajectory.epsilon = 0.02; }));
  EXPECT_TRUE(differs([](RunConfig& c) { c.trajectory.steps = 11; }));
  EXPECT_TRUE(differs([](RunConfig& c) { c.attack.alpha = 0.02; }));
  EXPECT_TRUE(differs([](RunConfig& c) { c.attack.delta = 2e-6; }));
  EXPECT_TRUE(differs([](RunConfig& c) { c.attack.steps = 9; }));
  // Seed, model and workers are tracked per record, not in the hash.
  EXPECT_FALSE(differs([](RunConfig& c) { c.global_seed = 1234; }));
  EXPECT_FALSE(differs([](RunConfig& c) { c.workers = 4; }));
  EXPECT_FALSE(differs([](RunConfig& c) { c.model.seed = 77; }));
}

// Writes a measure file and returns its path.
fs::path write_measures(const fs::path& dir, const std::string& name,
                        const std::vector<MeasureRecord>& records) {
  MeasureFile f;
  f.header.tool_version = std::string(kToolVersion);
  f.header.params_hash = records.front().params_hash;
  f.header.model_id = records.front().model_id;
  f.header.pixel_convention = std::string(kPixelConvention);
  f.header.n_records = records.size();
  f.records = records;
  std::sort(f.records.begin(), f.records.end(),
            [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
  const fs::path p = dir / (name + ".jsonl");
  write_measure_file(p, f);
  return p;
}

fs::path write_score(const fs::path& dir, const std::string& dataset, double value,
                     const std::string& hash = "p") {
  ScoreFile s;
  s.result.value = value;
  s.result.n_real = 10;
  s.result.n_generated = 10;
  s.params_hash = hash;
  s.model_id = "m";
  s.real = "real.jsonl";
  s.generated = dataset + ".jsonl";
  s.dataset = dataset;
  const fs::path p = dir / (dataset + ".score.json");
  spit(p, score_file_json(s));
  return p;
}

TEST(ReportTest, SummaryJsonMatchesMeasureFiles) {
  const auto dir = fixtures::temp_dir("report_summary");
  const auto real = fixtures::random_records("real", 30);
  const auto gen = fixtures::random_records("gen", 25);
  const auto pr = write_measures(dir, "real", real);
  const auto pg = write_measures(dir, "gan", gen);
  const auto report = build_report({write_score(dir, "gan", 0.4)}, {pr, pg}, std::nullopt);
  const auto parsed = parse_report_datasets(report_json(report));
  ASSERT_EQ(parsed.size(), 2u);
  auto expect_same = [](DatasetSummary want, const DatasetSummary& got) {
    EXPECT_EQ(want.name, got.name);
    EXPECT_EQ(want.n_images, got.n_images);
    EXPECT_DOUBLE_EQ(want.mean_complexity, got.mean_complexity);
    EXPECT_DOUBLE_EQ(want.std_vulnerability, got.std_vulnerability);
    EXPECT_EQ(want.mean_asi.has_value(), got.mean_asi.has_value());
  };
  for (const auto& d : parsed) {
    const auto& records = d.name == "real" ? real : gen;
    MeasureFile f;
    f.records = records;
    DatasetSummary want = summarize(f, d.name);
    expect_same(want, d);
    // Mean complexity computed independently.
    double s = 0.0;
    for (const auto& r : records) s += r.complexity;
    EXPECT_NEAR(d.mean_complexity, s / records.size(), 1e-12);
  }
  const auto gan = std::find_if(parsed.begin(), parsed.end(),
                                [](const auto& d) { return d.name == "gan"; });
  ASSERT_NE(gan, parsed.end());
  EXPECT_EQ(gan->anomaly_score.at("2d"), 0.4);
  const std::string md = report_markdown(report);
  EXPECT_NE(md.find("| gan"), std::string::npos);
}

TEST(ReportTest, CorrelatesWithExternalTable) {
  const auto dir = fixtures::temp_dir("report_corr");
  std::vector<fs::path> scores;
  const std::vector<double> as{0.1, 0.2, 0.35, 0.5};
  std::string csv = "dataset,human_error_rate,fid\n";
  for (std::size_t i = 0; i < as.size(); ++i) {
    const std::string name = "ds" + std::to_string(i);
    scores.push_back(write_score(dir, name, as[i]));
    // Strictly decreasing in AS: rank correlation -1.
    csv += name + "," + std::to_string(0.9 - 0.1 * i * i) + ",\"" +
           std::to_string(10.0 + i) + "\"\n";
  }
  spit(dir / "human.csv", csv);
  const auto report = build_report(scores, {}, dir / "human.csv");
  bool saw_human = false;
  for (const auto& c : report.correlations) {
    if (c.column == "human_error_rate") {
      saw_human = true;
      EXPECT_EQ(c.n, 4u);
      ASSERT_TRUE(c.spearman.has_value());
      EXPECT_NEAR(*c.spearman, -1.0, 1e-12);
      ASSERT_TRUE(c.pearson.has_value());
      std::vector<double> h;
      for (std::size_t i = 0; i < as.size(); ++i) h.push_back(0.9 - 0.1 * i * i);
      EXPECT_NEAR(*c.pearson, pearson(as, h), 1e-6);
    }
    if (c.column == "fid") {
      ASSERT_TRUE(c.spearman.has_value());
      EXPECT_NEAR(*c.spearman, 1.0, 1e-12);
    }
  }
  EXPECT_TRUE(saw_human);

  const auto out = dir / "out";
  write_report(out, scores, {}, dir / "human.csv");
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "summary.md"));
  EXPECT_TRUE(fs::exists(out / "as_vs_human.svg"));
  EXPECT_NE(slurp(out / "as_vs_human.svg").find("<svg"), std::string::npos);
}

TEST(ReportTest, RejectsMismatchedRuns) {
  const auto dir = fixtures::temp_dir("report_mismatch");
  const auto a = write_score(dir, "a", 0.1, "p");
  const auto b = write_score(dir, "b", 0.2, "q");
  EXPECT_THROW(build_report({a, b}, {}, std::nullopt), InputError);
  EXPECT_THROW(parse_external_csv("name,x\nfoo,1\n"), InputError);
  EXPECT_THROW(parse_score_file("{}"), InputError);
}

TEST(ReportTest, IdenticalSetsScoreZero) {
  const auto records = fixtures::random_records("same", 40);
  EXPECT_EQ(anomaly_score(records, records).value, 0.0);
}

TEST(ReportTest, CdfPlotContainsEverySeries) {
  const std::string svg = cdf_svg({{"real", {1, 2, 3}}, {"gan", {2, 3, 4}}}, "complexity");
  EXPECT_NE(svg.find("real"), std::string::npos);
  EXPECT_NE(svg.find("gan"), std::string::npos);
  EXPECT_NE(svg.find("complexity"), std::string::npos);
}

TEST(CorruptionTest, LevelZeroIsIdentityAndCorruptionIsDeterministic) {
  const auto x = procedural_image("c", {16, 16, 3}, "corr");
  const CorruptionOptions opt;
  const auto same = corrupt(x, 0.0, opt, "m");
  EXPECT_TRUE(std::equal(same.pixels().begin(), same.pixels().end(), x.pixels().begin()));
  const auto a = corrupt(x, 0.5, opt, "m");
  const auto b = corrupt(x, 0.5, opt, "m");
  EXPECT_TRUE(std::equal(a.pixels().begin(), a.pixels().end(), b.pixels().begin()));
  // Full blur with no noise is the box blur.
  const auto blurred = corrupt(x, 1.0, {2, 0.0}, "m");
  const auto ref = box_blur(x, 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_NEAR(blurred.pixels()[i], ref.pixels()[i], 1e-15);
  }
  EXPECT_THROW(corrupt(x, -0.1, opt, "m"), InputError);
  const auto p1 = procedural_image("p", {16, 16, 3}, "same");
  const auto p2 = procedural_image("p", {16, 16, 3}, "same");
  EXPECT_TRUE(std::equal(p1.pixels().begin(), p1.pixels().end(), p2.pixels().begin()));
}

TEST(CorruptionTest, BoxBlurPreservesConstantsAndMean) {
  const auto flat = ImageTensor::filled("f", {10, 10, 3}, 0.3);
  const auto blurred = box_blur(flat, 3);
  for (double v : blurred.pixels()) EXPECT_NEAR(v, 0.3, 1e-15);
  EXPECT_THROW(box_blur(flat, -1), InputError);
}

TEST(CorruptionTest, SmallBenchmarkHasExpectedShape) {
  CorruptionBenchConfig cfg;
  cfg.seeds = {1, 2};
  cfg.n_images = 8;
  cfg.run = small_config();
  const auto report = run_corruption_benchmark(cfg);
  ASSERT_EQ(report.seeds.size(), 2u);
  for (const auto& s : report.seeds) {
    ASSERT_EQ(s.levels.size(), cfg.levels.size() + 1);
    EXPECT_EQ(s.levels[0].level, 0.0);
    EXPECT_EQ(s.levels[0].anomaly_score, 0.0);
  }
  EXPECT_EQ(report.n_images, 8);
  const auto j = nlohmann::json::parse(corruption_report_json(report));
  EXPECT_EQ(j["seeds"].size(), 2u);
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_EQ(corruption_report_json(report), corruption_report_json(run_corruption_benchmark(cfg)));
  EXPECT_FALSE(report.seeds[0].vulnerability_test.pooled);
  cfg.pooled_ttest = true;
  EXPECT_TRUE(run_corruption_benchmark(cfg).seeds[0].vulnerability_test.pooled);
}

TEST(CorruptionTest, ConfigParsing) {
  const auto cfg = parse_corruption_config(R"({
    "n_seeds": 3, "first_seed": 10, "n_images": 12, "levels": [0.1, 0.9],
    "corruption": {"blur_radius": 1, "noise_sigma": 0.0}
  })");
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{10, 11, 12}));
  EXPECT_EQ(cfg.n_images, 12);
  EXPECT_EQ(cfg.levels, (std::vector<double>{0.1, 0.9}));
  EXPECT_EQ(cfg.corruption.blur_radius, 1);
  EXPECT_THROW(parse_corruption_config(R"({"levels": [0.5, 0.2]})"), InputError);
  EXPECT_THROW(parse_corruption_config(R"({"n_images": 1})"), InputError);
  EXPECT_FALSE(cfg.pooled_ttest);
  EXPECT_TRUE(parse_corruption_config(R"({"t_test": "student"})").pooled_ttest);
  EXPECT_THROW(parse_corruption_config(R"({"t_test": "paired"})"), InputError);
  const auto shipped = load_corruption_config(fs::path(ANOMALY_CONFIG_DIR) / "corruption_bench.json");
  EXPECT_EQ(shipped.seeds.size(), 20u);
  EXPECT_EQ(shipped.n_images, 64);
}

TEST(OverlayTest, WritesSidecarAndImage) {
  const auto dir = fixtures::temp_dir("overlay");
  const auto x = fixtures::random_image("o", {12, 12, 3}, "overlay");
  Segmentation seg = segment(x, 4);
  AttributionMap map;
  map.coefficients.assign(seg.count, 0.0);
  map.coefficients[0] = 1.0;
  map.trials = 2;
  map.design = {DesignRow(seg.count, 1), DesignRow(seg.count, 0)};
  map.responses = {0.5, 0.0};
  map.seed_material = "mat";
  write_attribution(dir, "o", x, seg, map, AttackConfig{}, "m", 1, 2);
  EXPECT_TRUE(fs::exists(dir / "o.overlay.png"));
  const auto j = nlohmann::json::parse(slurp(dir / "o.attribution.json"));
  EXPECT_EQ(j["coefficients"].size(), static_cast<std::size_t>(seg.count));
  EXPECT_EQ(j["seed_material"], "mat");
  EXPECT_EQ(j["labels"].size(), 144u);
  EXPECT_EQ(load_image(dir / "o.overlay.png", "o").shape(), (Shape{12, 12, 3}));
}

ModelConfig adapter_config(const std::string& options = "") {
  ModelConfig m;
  m.kind = ModelKind::kExternalAdapter;
  m.input_shape = {6, 6, 3};
  m.command = {"python3", std::string(ANOMALY_TEST_DATA) + "/linear_adapter.py"};
  m.adapter_json = options;
  return m;
}

AffineModel adapter_twin(const Shape& shape) {
  std::vector<double> a(4 * shape.size());
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < shape.size(); ++j) {
      a[i * shape.size() + j] = 0.1 * std::sin(0.7 * static_cast<double>((i + 1) * (j + 1)));
    }
  }
  return AffineModel("twin", shape, std::move(a), std::vector<double>(4, 0.0));
}

TEST(ExternalAdapterTest, MatchesInProcessTwin) {
  const auto cfg = adapter_config();
  const auto model = build_model(cfg);
  EXPECT_EQ(model->model_id(), "linear_adapter:d4");
  EXPECT_EQ(model->feature_dim(), 4u);
  const auto twin = adapter_twin(cfg.input_shape);
  const auto x = fixtures::random_image("ext", cfg.input_shape, "ext");
  const auto fe = model->forward(x);
  const auto ft = twin.forward(x);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(fe.values[i], ft.values[i], 1e-12);

  RunConfig run = small_config();
  run.model = cfg;
  run.attack.delta = 1e-3;
  const auto re = measure_image(run, *model, x, "");
  const auto rt = measure_image(run, twin, x, "");
  // Linear features: complexity is zero up to arccos rounding on both sides.
  EXPECT_LT(re.complexity, 1e-7);
  EXPECT_LT(rt.complexity, 1e-7);
  EXPECT_NEAR(re.vulnerability, rt.vulnerability, 1e-9 * std::max(1.0, rt.vulnerability));
  EXPECT_EQ(re.model_id, "linear_adapter:d4");
}

TEST(ExternalAdapterTest, ErrorsSurface) {
  const auto model = build_model(adapter_config(R"({"fail": "forward"})"));
  const auto x = fixtures::random_image("ext", {6, 6, 3}, "ext");
  EXPECT_THROW(model->forward(x), Error);
  const auto nan_model = build_model(adapter_config(R"({"nan_after": 2})"));
  RunConfig run = small_config();
  EXPECT_THROW(measure_image(run, *nan_model, x, ""), NumericError);
  ModelConfig missing = adapter_config();
  missing.command = {"/nonexistent/adapter"};
  EXPECT_THROW(build_model(missing), Error);
}

}  // namespace
}  // namespace anomaly::harness
