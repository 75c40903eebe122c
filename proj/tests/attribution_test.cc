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
#include <map>
#include <set>

#include "anomaly/attribution.h"
#include "anomaly/errors.h"
#include "anomaly/random.h"
#include "anomaly/toy_models.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace anomaly {
namespace {

std::map<int, int> label_areas(const Segmentation& seg) {
  std::map<int, int> area;
  for (int l : seg.labels) ++area[l];
  return area;
}

TEST(SegmentTest, UniformImageGivesGridTiles) {
  const auto x = ImageTensor::filled("gray", {32, 32, 3}, 0.5);
  const auto seg = segment(x, 4);
  ASSERT_EQ(seg.count, 4);
  EXPECT_TRUE(is_connected_partition(seg));
  for (const auto& [label, area] : label_areas(seg)) {
    EXPECT_NEAR(area, 256, 256 * 0.1) << "label " << label;
  }
  // Raster-order renumbering.
  EXPECT_EQ(seg.at(0, 0), 0);
}

TEST(SegmentTest, RandomImagesGiveConnectedPartitions) {
  for (int i = 0; i < 50; ++i) {
    const int n = 4 + (i % 5) * 6;
    const auto x = fixtures::random_image("img" + std::to_string(i), {24, 28, 3},
                                          "seg" + std::to_string(i), 0.0, 1.0);
    const auto seg = segment(x, n);
    ASSERT_EQ(seg.labels.size(), 24u * 28u);
    ASSERT_TRUE(is_connected_partition(seg)) << "image " << i;
    EXPECT_GE(seg.count, static_cast<int>(std::floor(0.7 * n))) << "image " << i;
    EXPECT_LE(seg.count, static_cast<int>(std::ceil(1.3 * n))) << "image " << i;
  }
}

TEST(SegmentTest, FollowsStrongEdge) {
  std::vector<double> px;
  const Shape shape{20, 20, 3};
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      for (int c = 0; c < 3; ++c) px.push_back(x < 10 ? 0.1 : 0.9);
    }
  }
  const ImageTensor img("split", shape, px);
  const auto seg = segment(img, 2);
  ASSERT_EQ(seg.count, 2);
  int misplaced = 0;
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      const bool left_label = seg.at(y, x) == seg.at(0, 0);
      if (left_label != (x < 10) && std::abs(x - 10) > 2) ++misplaced;
    }
  }
  EXPECT_EQ(misplaced, 0);
}

TEST(SegmentTest, SingleChannelAndDeterminism) {
  const auto x = fixtures::random_image("g", {16, 16, 1}, "gray", 0.0, 1.0);
  const auto a = segment(x, 6);
  const auto b = segment(x, 6);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_TRUE(is_connected_partition(a));
  EXPECT_THROW(segment(x, 0), InputError);
}

TEST(SegmentTest, ConnectivityCheckerRejectsBrokenPartitions) {
  Segmentation seg;
  seg.height = 2;
  seg.width = 3;
  seg.count = 2;
  seg.labels = {0, 1, 0, 0, 1, 0};
  EXPECT_FALSE(is_connected_partition(seg));  // label 0 split in two
  seg.labels = {0, 0, 0, 0, 0, 0};
  EXPECT_FALSE(is_connected_partition(seg));  // label 1 missing
  seg.labels = {0, 0, 1, 0, 0, 1};
  EXPECT_TRUE(is_connected_partition(seg));
}

TEST(DesignTest, RowsRespectBoundsAndAreDeterministic) {
  const auto d = draw_design(20, 200, 3, 6, "design-test");
  ASSERT_EQ(d.size(), 200u);
  std::set<int> counts;
  for (const auto& row : d) {
    ASSERT_EQ(row.size(), 20u);
    const int k = static_cast<int>(std::count(row.begin(), row.end(), 1));
    ASSERT_GE(k, 3);
    ASSERT_LE(k, 6);
    counts.insert(k);
  }
  EXPECT_EQ(counts, (std::set<int>{3, 4, 5, 6}));
  EXPECT_EQ(d, draw_design(20, 200, 3, 6, "design-test"));
  EXPECT_NE(d, draw_design(20, 200, 3, 6, "design-other"));
  EXPECT_THROW(draw_design(5, 10, 3, 6, "x"), InputError);
  EXPECT_THROW(draw_design(5, 10, 0, 2, "x"), InputError);
  EXPECT_THROW(draw_design(5, 0, 1, 2, "x"), InputError);
}

TEST(DesignTest, SelectionMaskCoversChosenSegments) {
  const auto x = fixtures::random_image("m", {12, 12, 3}, "mask", 0.0, 1.0);
  const auto seg = segment(x, 5);
  DesignRow row(seg.count, 0);
  row[1] = 1;
  const auto mask = selection_mask(seg, row, 3);
  ASSERT_EQ(mask.size(), 12u * 12u * 3u);
  for (std::size_t p = 0; p < seg.labels.size(); ++p) {
    for (int c = 0; c < 3; ++c) {
      ASSERT_EQ(mask[p * 3 + c], seg.labels[p] == 1 ? 1 : 0);
    }
  }
  EXPECT_THROW(selection_mask(seg, DesignRow(seg.count + 1, 0), 3), InputError);
}

TEST(FitTest, RecoversPlantedCoefficients) {
  constexpr int kS = 20;
  const auto design = draw_design(kS, 3 * kS, 3, 6, "planted");
  const auto w = fixtures::random_values("planted-w", kS, -1.0, 2.0);
  const double b = 0.37;
  std::vector<double> y;
  for (const auto& row : design) {
    double v = b;
    for (int j = 0; j < kS; ++j) v += row[j] * w[j];
    y.push_back(v);
  }
  const auto fit = fit_contributions(design, y);
  EXPECT_FALSE(fit.underdetermined);
  EXPECT_FALSE(fit.degenerate);
  EXPECT_EQ(fit.rank, kS + 1);
  double worst = std::fabs(fit.intercept - b);
  for (int j = 0; j < kS; ++j) worst = std::max(worst, std::fabs(fit.coefficients[j] - w[j]));
  EXPECT_LT(worst, 1e-8);
  EXPECT_LT(fit.residual_norm, 1e-8);
}

TEST(FitTest, EqualWeightsGiveEqualCoefficients) {
  constexpr int kS = 8;
  const auto design = draw_design(kS, 40, 2, 5, "equal");
  std::vector<double> y;
  for (const auto& row : design) {
    y.push_back(1.0 + 0.5 * static_cast<double>(std::count(row.begin(), row.end(), 1)));
  }
  const auto fit = fit_contributions(design, y);
  for (double c : fit.coefficients) EXPECT_NEAR(c, 0.5, 1e-10);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-10);
}

TEST(FitTest, MatchesNormalEquationsOnNoisyResponses) {
  constexpr int kS = 10;
  const auto design = draw_design(kS, 50, 2, 6, "noisy");
  const auto y = fixtures::random_values("noisy-y", design.size(), 0.0, 5.0);
  std::vector<std::vector<double>> v;
  for (const auto& row : design) v.emplace_back(row.begin(), row.end());
  const auto ref = oracle::normal_equations(v, y);
  ASSERT_TRUE(ref.has_value());
  const auto fit = fit_contributions(design, y);
  for (int j = 0; j < kS; ++j) EXPECT_NEAR(fit.coefficients[j], ref->w[j], 1e-9);
  EXPECT_NEAR(fit.intercept, ref->b, 1e-9);
  EXPECT_NEAR(fit.residual_norm, ref->residual_norm, 1e-9);
}

TEST(FitTest, FlagsDegenerateAndUnderdetermined) {
  const auto design = draw_design(20, 20, 3, 6, "under");
  const auto y = fixtures::random_values("under-y", 20, 0.0, 1.0);
  const auto under = fit_contributions(design, y);
  EXPECT_TRUE(under.underdetermined);
  EXPECT_LE(under.rank, 20);
  // Minimum-norm solution still interpolates.
  EXPECT_LT(under.residual_norm, 1e-9);

  const std::vector<double> flat(20, 0.25);
  const auto deg = fit_contributions(design, flat);
  EXPECT_TRUE(deg.degenerate);
  EXPECT_EQ(deg.intercept, 0.25);
  for (double c : deg.coefficients) EXPECT_EQ(c, 0.0);

  std::vector<double> bad = y;
  bad[3] = std::nan("");
  EXPECT_THROW(fit_contributions(design, bad), NumericError);
  EXPECT_THROW(fit_contributions(design, std::vector<double>(3, 0.0)), InputError);
}

// Features depend only on the left half of the image, so masked attacks that
// touch only right-half segments cannot move them.
AffineModel left_half_model(const Shape& shape) {
  const std::size_t d = 6;
  auto a = fixtures::random_values("left-a", d * shape.size(), -1.0, 1.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (int y = 0; y < shape.height; ++y) {
      for (int x = shape.width / 2; x < shape.width; ++x) {
        for (int c = 0; c < shape.channels; ++c) {
          a[r * shape.size() + pixel_index(shape, y, x, c)] = 0.0;
        }
      }
    }
  }
  return AffineModel("left_half", shape, std::move(a), std::vector<double>(d, 0.0));
}

TEST(AttributeTest, HighlightsSegmentsTheModelUses) {
  const Shape shape{16, 16, 3};
  const auto x = ImageTensor::filled("gray", shape, 0.5);
  const auto seg = segment(x, 4);
  ASSERT_EQ(seg.count, 4);
  const auto model = left_half_model(shape);
  AttackConfig cfg;
  cfg.delta = 1e-3;
  const auto map = attribute(model, x, seg, cfg, 24, 1, 3, "attr");
  ASSERT_EQ(map.responses.size(), 24u);
  ASSERT_EQ(map.design.size(), 24u);
  EXPECT_FALSE(map.underdetermined);
  double left_min = 1e300, right_max = -1e300;
  for (int l = 0; l < seg.count; ++l) {
    bool left = false;
    for (int y = 0; y < 16; ++y) {
      for (int xx = 0; xx < 8; ++xx) left |= seg.at(y, xx) == l;
    }
    if (left) {
      left_min = std::min(left_min, map.coefficients[l]);
    } else {
      right_max = std::max(right_max, map.coefficients[l]);
    }
  }
  EXPECT_GT(left_min, right_max + 0.01);
  // Trials that select only right-half segments leave the features untouched.
  for (std::size_t t = 0; t < map.design.size(); ++t) {
    bool touches_left = false;
    for (int l = 0; l < seg.count; ++l) {
      if (map.design[t][l] && map.coefficients[l] >= left_min) touches_left = true;
    }
    if (!touches_left) EXPECT_NEAR(map.responses[t], 0.0, 1e-12);
  }
}

TEST(AttributeTest, DeterministicAndDegenerateForConstantModel) {
  const Shape shape{12, 12, 3};
  const auto x = fixtures::random_image("c", shape, "attr-const");
  const auto seg = segment(x, 6);
  AttackConfig cfg;
  fixtures::ConstantModel constant({1.0, 2.0});
  const auto map = attribute(constant, x, seg, cfg, 10, 1, 3, "c");
  EXPECT_TRUE(map.degenerate_fit);
  for (double r : map.responses) EXPECT_EQ(r, 0.0);

  const auto model = left_half_model(shape);
  const auto a = attribute(model, x, seg, cfg, 10, 1, 3, "det");
  const auto b = attribute(model, x, seg, cfg, 10, 1, 3, "det");
  EXPECT_EQ(a.responses, b.responses);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.seed_material, "det");

  const auto other = ImageTensor::filled("o", {10, 12, 3}, 0.5);
  EXPECT_THROW(attribute(model, other, seg, cfg, 10, 1, 3, "x"), InputError);
}

TEST(RenderTest, DivergingColours) {
  const auto x = ImageTensor::filled("r", {8, 8, 1}, 0.5);
  const auto seg = segment(x, 4);
  ASSERT_EQ(seg.count, 4);
  std::vector<double> coef{0.0, 1.0, 2.0, 0.5};
  const auto out = render_contributions(x, seg, coef, 1.0);
  EXPECT_EQ(out.channels(), 3);
  for (int y = 0; y < 8; ++y) {
    for (int xx = 0; xx < 8; ++xx) {
      const int l = seg.at(y, xx);
      if (l == 2) {  // maximum: pure red
        EXPECT_EQ(out.at(y, xx, 0), 1.0);
        EXPECT_EQ(out.at(y, xx, 1), 0.0);
      } else if (l == 0) {  // minimum: pure blue
        EXPECT_EQ(out.at(y, xx, 2), 1.0);
        EXPECT_EQ(out.at(y, xx, 0), 0.0);
      } else if (l == 1) {  // midpoint: white
        EXPECT_EQ(out.at(y, xx, 0), 1.0);
        EXPECT_EQ(out.at(y, xx, 2), 1.0);
      }
    }
  }
  const auto half = render_contributions(x, seg, coef, 0.0);
  EXPECT_EQ(half.at(0, 0, 1), 0.5);
  EXPECT_THROW(render_contributions(x, seg, std::vector<double>{1.0}), InputError);
}

}  // namespace
}  // namespace anomaly
