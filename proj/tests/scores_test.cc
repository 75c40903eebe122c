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

#include <algorithm>
#include <cmath>

#include "anomaly/errors.h"
#include "anomaly/random.h"
#include "anomaly/scores.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace anomaly {
namespace {

std::vector<Point2> random_points(RandomStream& rng, std::size_t n, bool ties) {
  std::vector<Point2> p(n);
  for (auto& q : p) {
    if (ties) {
      q = {static_cast<double>(rng.uniform_int(0, 4)), static_cast<double>(rng.uniform_int(0, 4))};
    } else {
      q = {rng.normal(), rng.normal() * 2 + 1};
    }
  }
  return p;
}

TEST(Ks2dTest, EqualsBruteForceOnRandomInstances) {
  RandomStream rng("ks2d-random");
  for (int trial = 0; trial < 200; ++trial) {
    const auto na = static_cast<std::size_t>(rng.uniform_int(2, 64));
    const auto nb = static_cast<std::size_t>(rng.uniform_int(2, 64));
    const bool ties = trial % 3 == 0;
    const auto a = random_points(rng, na, ties);
    const auto b = random_points(rng, nb, ties);
    ASSERT_EQ(ks2d(a, b), oracle::ks2d(a, b)) << "trial " << trial;
    ASSERT_EQ(ks2d(a, b, KsCombine::kMax), oracle::ks2d(a, b, true)) << "trial " << trial;
  }
}

TEST(Ks2dTest, IdenticalSamplesAndSeparatedClusters) {
  const std::vector<Point2> a{{0, 0}, {0.1, 0.1}};
  EXPECT_EQ(ks2d(a, a), 0.0);

  // Clusters split along the anti-diagonal: every anchor sees a pure quadrant.
  const std::vector<Point2> ul{{0, 10}, {0.1, 10.1}};
  const std::vector<Point2> lr{{10, 0}, {11, 0.1}};
  EXPECT_EQ(ks2d(ul, lr), 1.0);
  EXPECT_EQ(ks2d(ul, lr, KsCombine::kMax), 1.0);

  // Split along the diagonal the upper cluster's lowest anchor keeps its
  // partner in (>,>) while the lower cluster lands in (<=,<=) with it, so
  // that side only reaches 1/2.
  const std::vector<Point2> b{{10, 10}, {11, 11}};
  EXPECT_EQ(oracle::ks2d(a, b), 0.75);
  EXPECT_EQ(ks2d(a, b), 0.75);
  EXPECT_EQ(ks2d(a, b, KsCombine::kMax), 1.0);
  RandomStream rng("ident");
  const auto c = random_points(rng, 40, false);
  EXPECT_EQ(ks2d(c, c), 0.0);
}

TEST(Ks2dTest, SymmetricAndPermutationInvariant) {
  RandomStream rng("sym");
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_points(rng, 30, trial % 2 == 0);
    auto b = random_points(rng, 17, trial % 2 == 0);
    const double d = ks2d(a, b);
    EXPECT_EQ(d, ks2d(b, a));
    std::reverse(a.begin(), a.end());
    std::rotate(b.begin(), b.begin() + 5, b.end());
    EXPECT_EQ(d, ks2d(a, b));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
}

TEST(Ks2dTest, InvariantUnderJointMonotoneTransforms) {
  RandomStream rng("mono");
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_points(rng, 25, false);
    auto b = random_points(rng, 33, false);
    const double d = ks2d(a, b);
    auto f = [](Point2 p) { return Point2{std::exp(p.x), std::atan(p.y) * 3 - 1}; };
    std::transform(a.begin(), a.end(), a.begin(), f);
    std::transform(b.begin(), b.end(), b.begin(), f);
    EXPECT_EQ(d, ks2d(a, b));
  }
}

TEST(Ks2dTest, RejectsEmptyAndNonFinite) {
  const std::vector<Point2> a{{0, 0}};
  EXPECT_THROW(ks2d(a, {}), InputError);
  const std::vector<Point2> bad{{0, 0}, {1, NAN}};
  try {
    ks2d(a, bad);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(Ks1dTest, EqualsBruteForceOnRandomInstances) {
  RandomStream rng("ks1d-random");
  for (int trial = 0; trial < 200; ++trial) {
    const auto na = static_cast<std::size_t>(rng.uniform_int(2, 64));
    const auto nb = static_cast<std::size_t>(rng.uniform_int(2, 64));
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = trial % 3 == 0 ? static_cast<double>(rng.uniform_int(0, 5)) : rng.normal();
    for (auto& v : b) v = trial % 3 == 0 ? static_cast<double>(rng.uniform_int(0, 5)) : rng.normal() + 0.3;
    ASSERT_EQ(ks1d(a, b), oracle::ks1d(a, b)) << "trial " << trial;
    ASSERT_EQ(ks1d(a, b), ks1d(b, a));
  }
}

TEST(Ks1dTest, TrivialCases) {
  const std::vector<double> a{0, 1}, b{10, 11};
  EXPECT_EQ(ks1d(a, a), 0.0);
  EXPECT_EQ(ks1d(a, b), 1.0);
  EXPECT_THROW(ks1d(a, {}), InputError);
  const std::vector<double> inf{1, INFINITY};
  EXPECT_THROW(ks1d(a, inf), InputError);
}

TEST(AnomalyScoreTest, ModesAndBounds) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto real = fixtures::random_records("real" + std::to_string(trial), 20 + trial % 7);
    auto gen = fixtures::random_records("gen" + std::to_string(trial), 15 + trial % 5);
    for (auto& r : gen) r.vulnerability *= 1.5;
    const auto r2 = anomaly_score(real, gen);
    EXPECT_GE(r2.value, 0.0);
    EXPECT_LE(r2.value, 1.0);
    EXPECT_EQ(r2.n_real, real.size());
    EXPECT_EQ(r2.n_generated, gen.size());
    std::vector<Point2> pa, pb;
    std::vector<double> ca, cb, va, vb;
    for (const auto& r : real) pa.push_back({r.complexity, r.vulnerability}), ca.push_back(r.complexity), va.push_back(r.vulnerability);
    for (const auto& r : gen) pb.push_back({r.complexity, r.vulnerability}), cb.push_back(r.complexity), vb.push_back(r.vulnerability);
    EXPECT_EQ(r2.value, ks2d(pa, pb));
    EXPECT_EQ(anomaly_score(real, gen, ScoreMode::kComplexity1d).value, ks1d(ca, cb));
    EXPECT_EQ(anomaly_score(real, gen, ScoreMode::kVulnerability1d).value, ks1d(va, vb));
  }
}

TEST(AnomalyScoreTest, IdenticalListsScoreZeroAndSeparatedScoreOne) {
  const auto real = fixtures::random_records("same", 30);
  EXPECT_EQ(anomaly_score(real, real).value, 0.0);
  auto high_v = real;
  auto high_c = real;
  for (auto& r : high_v) r.vulnerability += 100;
  for (auto& r : high_c) r.complexity += 10;
  EXPECT_EQ(anomaly_score(high_v, high_c).value, 1.0);
}

TEST(AnomalyScoreTest, RejectsIncomparableRecords) {
  const auto real = fixtures::random_records("a", 5);
  auto gen = fixtures::random_records("b", 5);
  gen[2].params_hash = "other";
  EXPECT_THROW(anomaly_score(real, gen), InputError);
  gen = fixtures::random_records("b", 5);
  gen[0].model_id = "other";
  EXPECT_THROW(anomaly_score(real, gen), InputError);
  EXPECT_THROW(anomaly_score(real, {}), InputError);
}

TEST(AsiTest, RatioAndMean) {
  MeasureRecord r;
  r.complexity = 0.05;
  r.vulnerability = 15;
  EXPECT_DOUBLE_EQ(asi(r), 300.0);
  EXPECT_DOUBLE_EQ(mean_asi(std::vector<MeasureRecord>{r}), 300.0);
  MeasureRecord r2 = r;
  r2.vulnerability = 5;
  EXPECT_DOUBLE_EQ(mean_asi(std::vector<MeasureRecord>{r, r2}), 200.0);
  r2.complexity = 1e-13;
  try {
    asi(r2);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate complexity"), std::string::npos);
  }
  EXPECT_THROW(mean_asi(std::vector<MeasureRecord>{}), InputError);
}

TEST(ScoreEnumsTest, ParseAndPrint) {
  EXPECT_EQ(parse_score_mode("2d"), ScoreMode::k2d);
  EXPECT_EQ(parse_score_mode("complexity"), ScoreMode::kComplexity1d);
  EXPECT_EQ(parse_score_mode("vulnerability_1d"), ScoreMode::kVulnerability1d);
  EXPECT_EQ(parse_ks_combine("max"), KsCombine::kMax);
  EXPECT_EQ(to_string(KsCombine::kAverage), "average");
  EXPECT_THROW(parse_score_mode("3d"), InputError);
  EXPECT_THROW(parse_ks_combine("min"), InputError);
}

}  // namespace
}  // namespace anomaly
