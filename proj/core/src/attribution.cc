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

#include "anomaly/attribution.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "anomaly/errors.h"
#include "anomaly/random.h"

namespace anomaly {

std::vector<DesignRow> draw_design(int n_segments, int trials, int min_sel,
                                   int max_sel, std::string_view material) {
  if (trials < 1) throw InputError("attribution needs trials >= 1");
  if (!(1 <= min_sel && min_sel <= max_sel && max_sel <= n_segments)) {
    throw InputError("attribution needs 1 <= min_sel <= max_sel <= S (got " +
                     std::to_string(min_sel) + ", " + std::to_string(max_sel) +
                     ", S = " + std::to_string(n_segments) + ")");
  }
  RandomStream stream(std::string(material) + "\x1f" "design");
  std::vector<DesignRow> design;
  design.reserve(trials);
  std::vector<int> pool(n_segments);
  for (int t = 0; t < trials; ++t) {
    const auto count = static_cast<int>(stream.uniform_int(min_sel, max_sel));
    std::iota(pool.begin(), pool.end(), 0);
    DesignRow row(n_segments, 0);
    // Partial Fisher-Yates.
    for (int i = 0; i < count; ++i) {
      const auto j = static_cast<int>(stream.uniform_int(i, n_segments - 1));
      std::swap(pool[i], pool[j]);
      row[pool[i]] = 1;
    }
    design.push_back(std::move(row));
  }
  return design;
}

std::vector<std::uint8_t> selection_mask(const Segmentation& seg,
                                         const DesignRow& row, int channels) {
  if (static_cast<int>(row.size()) != seg.count) {
    throw InputError("selection row has " + std::to_string(row.size()) +
                     " entries, segmentation has " + std::to_string(seg.count));
  }
  std::vector<std::uint8_t> mask(seg.labels.size() * channels, 0);
  for (std::size_t p = 0; p < seg.labels.size(); ++p) {
    if (row[seg.labels[p]]) {
      std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(p * channels), channels, 1);
    }
  }
  return mask;
}

LinearFit fit_contributions(std::span<const DesignRow> design,
                            std::span<const double> responses) {
  if (design.empty()) throw InputError("fit_contributions: empty design");
  if (design.size() != responses.size()) {
    throw InputError("fit_contributions: design/response length mismatch");
  }
  const auto rows = static_cast<Eigen::Index>(design.size());
  const auto s = static_cast<Eigen::Index>(design.front().size());
  for (double r : responses) {
    if (!std::isfinite(r)) throw NumericError("fit_contributions: non-finite response");
  }

  LinearFit fit;
  fit.coefficients.assign(static_cast<std::size_t>(s), 0.0);
  Eigen::MatrixXd v(rows, s + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(design[i].size()) != s) {
      throw InputError("fit_contributions: ragged design matrix");
    }
    for (Eigen::Index j = 0; j < s; ++j) v(i, j) = design[i][j];
    v(i, s) = 1.0;
    y(i) = responses[i];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(v);
  fit.rank = static_cast<int>(cod.rank());
  fit.underdetermined = fit.rank < s + 1;

  const bool constant = std::all_of(responses.begin(), responses.end(),
                                    [&](double r) { return r == responses.front(); });
  if (constant) {
    fit.degenerate = true;
    fit.intercept = responses.front();
    return fit;
  }
  const Eigen::VectorXd beta = cod.solve(y);
  for (Eigen::Index j = 0; j < s; ++j) fit.coefficients[j] = beta(j);
  fit.intercept = beta(s);
  fit.residual_norm = (v * beta - y).norm();
  return fit;
}

AttributionMap attribute(const FeatureModel& model, const ImageTensor& x,
                         const Segmentation& seg, const AttackConfig& cfg,
                         int trials, int min_sel, int max_sel,
                         std::string_view material) {
  if (seg.height != x.height() || seg.width != x.width()) {
    throw InputError("attribute: segmentation does not match image '" + x.id() + "'");
  }
  AttributionMap map;
  map.seed_material = std::string(material);
  map.trials = trials;
  map.design = draw_design(seg.count, trials, min_sel, max_sel, material);
  map.responses.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    AttackConfig masked = cfg;
    masked.mask = selection_mask(seg, map.design[t], x.channels());
    const std::string trial_material =
        std::string(material) + "\x1f" "trial" + std::to_string(t);
    map.responses.push_back(vulnerability(model, x, masked, trial_material).vulnerability);
  }
  const LinearFit fit = fit_contributions(map.design, map.responses);
  map.coefficients = fit.coefficients;
  map.intercept = fit.intercept;
  map.degenerate_fit = fit.degenerate;
  map.underdetermined = fit.underdetermined;
  map.rank = fit.rank;
  return map;
}

ImageTensor render_contributions(const ImageTensor& x, const Segmentation& seg,
                                 std::span<const double> coefficients,
                                 double opacity) {
  if (static_cast<int>(coefficients.size()) != seg.count) {
    throw InputError("render_contributions: coefficient count mismatch");
  }
  const auto [lo_it, hi_it] = std::minmax_element(coefficients.begin(), coefficients.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const Shape out_shape{x.height(), x.width(), 3};
  std::vector<double> px(out_shape.size());
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      double grey = 0.0;
      for (int c = 0; c < x.channels(); ++c) grey += x.at(y, xx, c);
      grey /= x.channels();
      const double c = coefficients[seg.at(y, xx)];
      const double t = hi > lo ? (c - lo) / (hi - lo) : 0.5;
      double rgb[3];
      if (t < 0.5) {  // blue -> white
        const double u = t / 0.5;
        rgb[0] = u;
        rgb[1] = u;
        rgb[2] = 1.0;
      } else {  // white -> red
        const double u = (t - 0.5) / 0.5;
        rgb[0] = 1.0;
        rgb[1] = 1.0 - u;
        rgb[2] = 1.0 - u;
      }
      for (int ch = 0; ch < 3; ++ch) {
        px[pixel_index(out_shape, y, xx, ch)] =
            clip01((1.0 - opacity) * grey + opacity * rgb[ch]);
      }
    }
  }
  return ImageTensor(x.id(), out_shape, std::move(px));
}

}  // namespace anomaly
