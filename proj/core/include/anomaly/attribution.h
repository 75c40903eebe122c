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

#ifndef ANOMALY_ATTRIBUTION_H_
#define ANOMALY_ATTRIBUTION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anomaly/feature_model.h"
#include "anomaly/image.h"
#include "anomaly/vulnerability.h"

namespace anomaly {

struct Segmentation {
  int height = 0;
  int width = 0;
  int count = 0;            // S
  std::vector<int> labels;  // H*W, row-major, each in [0, S)

  int at(int y, int x) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

struct SlicOptions {
  double compactness = 10.0;  // weight of spatial distance against colour
  int iterations = 10;
};

// SLIC-style super-pixels: k-means over CIELAB colour (or scaled channel
// values when C != 3) and position, seeded on a regular grid and searched in
// a 2S x 2S window, followed by connectivity enforcement that keeps the
// largest component of each cluster. Labels are renumbered in raster order of
// first appearance.
Segmentation segment(const ImageTensor& x, int n_segments,
                     const SlicOptions& options = {});

// True when every label in [0, count) occurs and forms one 4-connected region.
bool is_connected_partition(const Segmentation& seg);

using DesignRow = std::vector<std::uint8_t>;

// `trials` rows over `n_segments` columns; each row selects a uniformly drawn
// number in [min_sel, max_sel] of distinct super-pixels.
std::vector<DesignRow> draw_design(int n_segments, int trials, int min_sel,
                                   int max_sel, std::string_view material);

// Per-pixel-entry (HWC) attack mask selecting the super-pixels set in `row`.
std::vector<std::uint8_t> selection_mask(const Segmentation& seg,
                                         const DesignRow& row, int channels);

struct LinearFit {
  std::vector<double> coefficients;  // W
  double intercept = 0.0;            // b
  int rank = 0;                      // rank of [V | 1]
  bool degenerate = false;           // all responses identical
  bool underdetermined = false;      // rank < S + 1; minimum-norm solution
  double residual_norm = 0.0;
};

// Least-squares fit of responses = design * W + b. Returns the minimum-norm
// solution when [design | 1] is rank deficient.
LinearFit fit_contributions(std::span<const DesignRow> design,
                            std::span<const double> responses);

struct AttributionMap {
  std::vector<double> coefficients;
  double intercept = 0.0;
  int trials = 0;
  std::vector<DesignRow> design;
  std::vector<double> responses;  // masked-attack vulnerability per trial
  bool degenerate_fit = false;
  bool underdetermined = false;
  int rank = 0;
  std::string seed_material;
};

// Runs one masked attack per trial on a random subset of super-pixels and
// regresses the resulting feature displacement on the selection indicators.
AttributionMap attribute(const FeatureModel& model, const ImageTensor& x,
                         const Segmentation& seg, const AttackConfig& cfg,
                         int trials, int min_sel, int max_sel,
                         std::string_view material);

// Blends a diverging blue-white-red rendering of the min-max normalised
// coefficients over a grey copy of `x`; red marks the largest contribution.
ImageTensor render_contributions(const ImageTensor& x, const Segmentation& seg,
                                 std::span<const double> coefficients,
                                 double opacity = 0.6);

}  // namespace anomaly

#endif  // ANOMALY_ATTRIBUTION_H_
