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

#ifndef ANOMALY_RANDOM_H_
#define ANOMALY_RANDOM_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anomaly/image.h"

namespace anomaly {

// Philox4x32-10 counter-based generator. Every output is a pure function of
// (key, counter), so streams can be split across workers by key without any
// shared state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Derives the key from the first 8 bytes of SHA-256(material).
  static CounterRng from_material(std::string_view material);

  std::uint64_t key() const { return key_; }

  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

// Sequential reader over a CounterRng. Cheap to copy.
class RandomStream {
 public:
  explicit RandomStream(CounterRng rng) : rng_(rng) {}
  explicit RandomStream(std::string_view material)
      : rng_(CounterRng::from_material(material)) {}

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();
  // Standard normal via Box-Muller.
  double normal();
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Seed material for per-image randomness: a pure function of the global
// seed, the image id, and what the randomness is for.
std::string seed_material(std::uint64_t global_seed, std::string_view image_id,
                          std::string_view purpose);

struct RandomDirection {
  Shape shape;
  std::vector<double> values;  // unit L2 norm over all entries
};

// i.i.d. standard normal entries keyed by `material`, divided by their
// global L2 norm. An all-zero draw is retried with an attempt suffix.
RandomDirection sample_unit_direction(std::string_view material, Shape shape);

}  // namespace anomaly

#endif  // ANOMALY_RANDOM_H_
