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

#include "anomaly/harness/measure.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "anomaly/errors.h"
#include "anomaly/hashing.h"
#include "anomaly/harness/image_io.h"
#include "anomaly/random.h"

namespace anomaly::harness {

namespace fs = std::filesystem;

namespace {

MeasureHeader make_header(const RunConfig& cfg, const FeatureModel& model) {
  MeasureHeader h;
  h.tool_version = std::string(kToolVersion);
  h.params_hash = params_hash(cfg);
  h.model_id = model.model_id();
  h.global_seed = cfg.global_seed;
  h.trajectory = cfg.trajectory;
  h.attack = cfg.attack;
  h.attack.mask.reset();
  h.pixel_convention = std::string(kPixelConvention);
  return h;
}

std::string pixel_digest(const ImageTensor& img) {
  const auto px = img.pixels();
  std::string bytes = img.shape().to_string();
  bytes.append(reinterpret_cast<const char*>(px.data()), px.size() * sizeof(double));
  return sha256_hex(bytes);
}

fs::path cache_path(const fs::path& dir, const std::string& params,
                    const std::string& model_id, std::uint64_t seed,
                    const std::string& image_id, const std::string& digest) {
  const std::string key = params + '\x1f' + model_id + '\x1f' + std::to_string(seed) +
                          '\x1f' + image_id + '\x1f' + digest;
  return dir / (sha256_hex(key) + ".json");
}

std::optional<MeasureRecord> cache_lookup(const fs::path& path,
                                          const std::string& params,
                                          const std::string& model_id,
                                          std::uint64_t seed,
                                          const std::string& image_id,
                                          const std::string& digest) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  std::getline(in, line);
  try {
    MeasureRecord r = record_from_json(line);
    if (r.params_hash == params && r.model_id == model_id && r.seed == seed &&
        r.image_id == image_id && r.image_digest == digest) {
      return r;
    }
  } catch (const Error&) {
    // Corrupt entries are recomputed.
  }
  return std::nullopt;
}

void cache_store(const fs::path& path, const MeasureRecord& r) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp" +
                       std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;
    out << record_to_json(r) << '\n';
  }
  fs::rename(tmp, path, ec);
}

// Runs fn(i) for i in [0, n) on `workers` threads; rethrows the first error.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

MeasureRecord measure_image(const RunConfig& cfg, const FeatureModel& model,
                            const ImageTensor& image, const std::string& digest) {
  AttackConfig attack = cfg.attack;
  attack.mask.reset();
  const TrajectoryResult traj = complexity(
      model, image, cfg.trajectory, seed_material(cfg.global_seed, image.id(), "complexity"));
  const AttackResult atk = vulnerability(
      model, image, attack, seed_material(cfg.global_seed, image.id(), "vulnerability"));
  MeasureRecord r;
  r.image_id = image.id();
  r.complexity = traj.complexity;
  r.vulnerability = atk.vulnerability;
  r.model_id = model.model_id();
  r.params_hash = params_hash(cfg);
  r.seed = cfg.global_seed;
  r.image_digest = digest;
  r.skipped_terms = traj.skipped_terms;
  r.attack_terminated_early = atk.terminated_early;
  return r;
}

MeasureFile measure_images(const RunConfig& cfg, const FeatureModel& model,
                           std::span<const ImageTensor> images, MeasureStats* stats) {
  cfg.trajectory.validate();
  MeasureFile file;
  file.header = make_header(cfg, model);
  std::vector<const ImageTensor*> order;
  for (const auto& img : images) order.push_back(&img);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->id() < b->id(); });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->id() == order[i - 1]->id()) {
      throw InputError("duplicate image id '" + order[i]->id() + "'");
    }
  }
  file.records.resize(order.size());
  parallel_for(order.size(), cfg.workers, [&](std::size_t i) {
    file.records[i] = measure_image(cfg, model, *order[i], pixel_digest(*order[i]));
  });
  file.header.n_records = file.records.size();
  if (stats) stats->computed += file.records.size();
  return file;
}

MeasureFile measure_directory(const RunConfig& cfg, const FeatureModel& model,
                              const fs::path& dir, MeasureStats* stats) {
  cfg.trajectory.validate();
  const std::vector<DatasetEntry> entries = list_images(dir);
  const std::string params = params_hash(cfg);
  fs::path cache_dir = cfg.cache_dir;
  if (cache_dir.empty()) {
    if (const char* env = std::getenv(kCacheDirEnv); env && *env) cache_dir = env;
  }

  struct Slot {
    std::optional<MeasureRecord> record;
    std::optional<std::string> skip_reason;
    bool from_cache = false;
  };
  std::vector<Slot> slots(entries.size());

  parallel_for(entries.size(), cfg.workers, [&](std::size_t i) {
    const DatasetEntry& e = entries[i];
    Slot& slot = slots[i];
    std::vector<std::uint8_t> bytes;
    try {
      bytes = read_file_bytes(e.path);
    } catch (const InputError& err) {
      slot.skip_reason = err.what();
      return;
    }
    const std::string digest = to_hex(sha256(bytes));
    fs::path cached;
    if (!cache_dir.empty()) {
      cached = cache_path(cache_dir, params, model.model_id(), cfg.global_seed,
                          e.id, digest);
      if (auto hit = cache_lookup(cached, params, model.model_id(), cfg.global_seed,
                                  e.id, digest)) {
        slot.record = std::move(hit);
        slot.from_cache = true;
        return;
      }
    }
    std::optional<ImageTensor> image;
    try {
      image.emplace(decode_image(bytes, e.id));
      slot.record = measure_image(cfg, model, *image, digest);
    } catch (const NumericError&) {
      throw;
    } catch (const InputError& err) {
      // Undecodable files and shape mismatches are skipped, not fatal.
      slot.skip_reason = err.what();
      return;
    }
    if (!cached.empty()) cache_store(cached, *slot.record);
  });

  MeasureFile file;
  file.header = make_header(cfg, model);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (slots[i].record) {
      file.records.push_back(std::move(*slots[i].record));
      if (stats) {
        if (slots[i].from_cache) {
          ++stats->cache_hits;
        } else {
          ++stats->computed;
        }
      }
    } else {
      file.header.skipped.push_back({entries[i].id, *slots[i].skip_reason});
    }
  }
  file.header.n_records = file.records.size();
  return file;
}

fs::path measure_dataset(const RunConfig& cfg, DatasetRole which) {
  const fs::path& dir = which == DatasetRole::kReal ? cfg.real_dir : cfg.generated_dir;
  if (dir.empty()) {
    throw InputError(std::string("run config has no ") +
                     (which == DatasetRole::kReal ? "real" : "generated") + " directory");
  }
  const auto model = build_model(cfg.model);
  const MeasureFile file = measure_directory(cfg, *model, dir);
  const fs::path out =
      cfg.output_dir / (which == DatasetRole::kReal ? "real.jsonl" : "generated.jsonl");
  write_measure_file(out, file);
  return out;
}

}  // namespace anomaly::harness
