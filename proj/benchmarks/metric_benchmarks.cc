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


#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "anomaly/attribution.h"
#include "anomaly/complexity.h"
#include "anomaly/random.h"
#include "anomaly/scores.h"
#include "anomaly/toy_models.h"
#include "anomaly/vulnerability.h"

namespace {

using namespace anomaly;

std::vector<Point2> points(std::string_view material, std::size_t n) {
  RandomStream rng(material);
  std::vector<Point2> out(n);
  for (auto& p : out) p = {rng.normal(), rng.normal()};
  return out;
}

ImageTensor image(const Shape& s, std::string_view material) {
  RandomStream rng(material);
  std::vector<double> px(s.size());
  for (auto& v : px) v = rng.uniform();
  return ImageTensor("bench", s, std::move(px));
}

void BM_Ks2d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = points("bench-a", n);
  const auto b = points("bench-b", n);
  for (auto _ : state) benchmark::DoNotOptimize(ks2d(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Ks2d)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_Complexity(benchmark::State& state) {
  const Shape s{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 3};
  const auto model = make_toy_nonlinear_model(1, s, 16);
  const auto x = image(s, "bench-c");
  for (auto _ : state) benchmark::DoNotOptimize(complexity(*model, x, {}, "walk").complexity);
}
BENCHMARK(BM_Complexity)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Vulnerability(benchmark::State& state) {
  const Shape s{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 3};
  const auto model = make_toy_nonlinear_model(1, s, 16);
  const auto x = image(s, "bench-v");
  for (auto _ : state) {
    benchmark::DoNotOptimize(vulnerability(*model, x, {}, "attack").vulnerability);
  }
}
BENCHMARK(BM_Vulnerability)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Segment(benchmark::State& state) {
  const Shape s{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 3};
  const auto x = image(s, "bench-s");
  for (auto _ : state) benchmark::DoNotOptimize(segment(x, 20).count);
}
BENCHMARK(BM_Segment)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
