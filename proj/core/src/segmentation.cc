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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "anomaly/attribution.h"
#include "anomaly/errors.h"

namespace anomaly {
namespace {

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  return t > kDelta * kDelta * kDelta ? std::cbrt(t)
                                      : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

// D65 white point.
std::array<double, 3> rgb_to_lab(double r, double g, double b) {
  r = srgb_to_linear(r);
  g = srgb_to_linear(g);
  b = srgb_to_linear(b);
  const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  const double fx = lab_f(x);
  const double fy = lab_f(y);
  const double fz = lab_f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

struct Centre {
  double y = 0.0;
  double x = 0.0;
  std::vector<double> colour;
};

}  // namespace

Segmentation segment(const ImageTensor& img, int n_segments,
                     const SlicOptions& options) {
  const int h = img.height();
  const int w = img.width();
  const std::size_t n_pixels = static_cast<std::size_t>(h) * w;
  if (n_segments < 2) throw InputError("segment: n_segments must be >= 2");
  if (static_cast<std::size_t>(n_segments) > n_pixels) {
    throw InputError("segment: image '" + img.id() + "' (" +
                     img.shape().to_string() + ") is too small for " +
                     std::to_string(n_segments) + " segments");
  }

  // Colour features per pixel.
  const int cdim = img.channels() == 3 ? 3 : img.channels();
  std::vector<double> colour(n_pixels * cdim);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double* dst = colour.data() + (static_cast<std::size_t>(y) * w + x) * cdim;
      if (img.channels() == 3) {
        const auto lab = rgb_to_lab(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2));
        std::copy(lab.begin(), lab.end(), dst);
      } else {
        for (int c = 0; c < cdim; ++c) dst[c] = 100.0 * img.at(y, x, c);
      }
    }
  }
  auto colour_at = [&](int y, int x) {
    return colour.data() + (static_cast<std::size_t>(y) * w + x) * cdim;
  };
  auto gradient_at = [&](int y, int x) {
    const int y0 = std::max(y - 1, 0), y1 = std::min(y + 1, h - 1);
    const int x0 = std::max(x - 1, 0), x1 = std::min(x + 1, w - 1);
    double g = 0.0;
    for (int c = 0; c < cdim; ++c) {
      const double dx = colour_at(y, x1)[c] - colour_at(y, x0)[c];
      const double dy = colour_at(y1, x)[c] - colour_at(y0, x)[c];
      g += dx * dx + dy * dy;
    }
    return g;
  };

  // Seed exactly n_segments centres: `rows` bands, counts split evenly.
  const int rows = std::clamp(
      static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_segments) * h / w))),
      1, std::min(h, n_segments));
  std::vector<Centre> centres;
  for (int r = 0; r < rows; ++r) {
    const int in_row = static_cast<int>(static_cast<long long>(r + 1) * n_segments / rows -
                                        static_cast<long long>(r) * n_segments / rows);
    if (in_row > w) {
      throw InputError("segment: cannot place " + std::to_string(n_segments) +
                       " seeds on a " + img.shape().to_string() + " image");
    }
    const double cy = (r + 0.5) * h / rows;
    for (int c = 0; c < in_row; ++c) {
      const double cx = (c + 0.5) * w / in_row;
      int iy = std::clamp(static_cast<int>(cy), 0, h - 1);
      int ix = std::clamp(static_cast<int>(cx), 0, w - 1);
      // Nudge off edges to the lowest-gradient neighbour.
      double best = gradient_at(iy, ix);
      int by = iy, bx = ix;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int yy = iy + dy, xx = ix + dx;
          if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
          const double g = gradient_at(yy, xx);
          if (g < best) {
            best = g;
            by = yy;
            bx = xx;
          }
        }
      }
      Centre ctr;
      ctr.y = by == iy ? cy : by + 0.5;
      ctr.x = bx == ix ? cx : bx + 0.5;
      ctr.colour.assign(colour_at(by, bx), colour_at(by, bx) + cdim);
      centres.push_back(std::move(ctr));
    }
  }
  const int k = static_cast<int>(centres.size());
  const double step = std::sqrt(static_cast<double>(n_pixels) / k);
  const double spatial_weight = (options.compactness / step) * (options.compactness / step);

  std::vector<int> labels(n_pixels, -1);
  std::vector<double> dist(n_pixels);
  for (int iter = 0; iter < std::max(1, options.iterations); ++iter) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    for (int ci = 0; ci < k; ++ci) {
      const Centre& ctr = centres[ci];
      const int y0 = std::max(0, static_cast<int>(std::floor(ctr.y - step)));
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(ctr.y + step)));
      const int x0 = std::max(0, static_cast<int>(std::floor(ctr.x - step)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(ctr.x + step)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double* col = colour_at(y, x);
          double dc = 0.0;
          for (int c = 0; c < cdim; ++c) {
            const double d = col[c] - ctr.colour[c];
            dc += d * d;
          }
          const double py = y + 0.5 - ctr.y;
          const double px = x + 0.5 - ctr.x;
          const double d = dc + spatial_weight * (py * py + px * px);
          const std::size_t idx = static_cast<std::size_t>(y) * w + x;
          if (d < dist[idx]) {
            dist[idx] = d;
            labels[idx] = ci;
          }
        }
      }
    }
    // Pixels outside every window go to the spatially nearest centre.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        if (labels[idx] >= 0 && std::isfinite(dist[idx])) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int ci = 0; ci < k; ++ci) {
          const double py = y + 0.5 - centres[ci].y;
          const double px = x + 0.5 - centres[ci].x;
          const double d = py * py + px * px;
          if (d < best) {
            best = d;
            labels[idx] = ci;
          }
        }
      }
    }
    // Recompute centres; empty clusters keep their previous position.
    std::vector<double> sy(k, 0.0), sx(k, 0.0), cnt(k, 0.0);
    std::vector<double> sc(static_cast<std::size_t>(k) * cdim, 0.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int l = labels[static_cast<std::size_t>(y) * w + x];
        sy[l] += y + 0.5;
        sx[l] += x + 0.5;
        cnt[l] += 1.0;
        const double* col = colour_at(y, x);
        for (int c = 0; c < cdim; ++c) sc[static_cast<std::size_t>(l) * cdim + c] += col[c];
      }
    }
    for (int ci = 0; ci < k; ++ci) {
      if (cnt[ci] == 0.0) continue;
      centres[ci].y = sy[ci] / cnt[ci];
      centres[ci].x = sx[ci] / cnt[ci];
      for (int c = 0; c < cdim; ++c) {
        centres[ci].colour[c] = sc[static_cast<std::size_t>(ci) * cdim + c] / cnt[ci];
      }
    }
  }

  // Connectivity enforcement. Each cluster keeps its largest 4-connected
  // component; stray fragments are absorbed by a breadth-first flood from the
  // kept components, so every final region stays connected and noisy images
  // do not lose whole clusters.
  constexpr int kDy[4] = {-1, 0, 1, 0};
  constexpr int kDx[4] = {0, -1, 0, 1};
  std::vector<int> component(n_pixels, -1);
  std::vector<std::size_t> comp_size;
  std::vector<int> comp_cluster;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n_pixels; ++start) {
    if (component[start] >= 0) continue;
    const int id = static_cast<int>(comp_size.size());
    const int original = labels[start];
    std::size_t size = 0;
    component[start] = id;
    stack.assign(1, start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      ++size;
      const int cy = static_cast<int>(i / w);
      const int cx = static_cast<int>(i % w);
      for (int d = 0; d < 4; ++d) {
        const int yy = cy + kDy[d], xx = cx + kDx[d];
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
        if (component[j] < 0 && labels[j] == original) {
          component[j] = id;
          stack.push_back(j);
        }
      }
    }
    comp_size.push_back(size);
    comp_cluster.push_back(original);
  }
  std::vector<int> kept(k, -1);
  for (int c = 0; c < static_cast<int>(comp_size.size()); ++c) {
    int& best = kept[comp_cluster[c]];
    if (best < 0 || comp_size[c] > comp_size[best]) best = c;
  }
  std::vector<char> is_kept(comp_size.size(), 0);
  for (int c : kept) {
    if (c >= 0) is_kept[c] = 1;
  }

  std::vector<int> region(n_pixels, -1);  // kept component id per pixel
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < n_pixels; ++i) {
    if (is_kept[component[i]]) {
      region[i] = component[i];
      frontier.push(i);
    }
  }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop();
    const int cy = static_cast<int>(i / w);
    const int cx = static_cast<int>(i % w);
    for (int d = 0; d < 4; ++d) {
      const int yy = cy + kDy[d], xx = cx + kDx[d];
      if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
      const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
      if (region[j] < 0) {
        region[j] = region[i];
        frontier.push(j);
      }
    }
  }

  // Renumber in raster order of first appearance.
  std::vector<int> renumber(comp_size.size(), -1);
  std::vector<int> out(n_pixels);
  int next_label = 0;
  for (std::size_t i = 0; i < n_pixels; ++i) {
    int& r = renumber[region[i]];
    if (r < 0) r = next_label++;
    out[i] = r;
  }

  Segmentation seg;
  seg.height = h;
  seg.width = w;
  seg.count = next_label;
  seg.labels = std::move(out);
  return seg;
}

bool is_connected_partition(const Segmentation& seg) {
  const std::size_t n = static_cast<std::size_t>(seg.height) * seg.width;
  if (seg.count <= 0 || seg.labels.size() != n) return false;
  std::vector<std::size_t> first(seg.count, n);
  std::vector<std::size_t> size(seg.count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int l = seg.labels[i];
    if (l < 0 || l >= seg.count) return false;
    if (first[l] == n) first[l] = i;
    ++size[l];
  }
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> q;
  for (int l = 0; l < seg.count; ++l) {
    if (first[l] == n) return false;
    std::size_t reached = 0;
    q.push(first[l]);
    seen[first[l]] = 1;
    while (!q.empty()) {
      const std::size_t i = q.front();
      q.pop();
      ++reached;
      const int y = static_cast<int>(i / seg.width);
      const int x = static_cast<int>(i % seg.width);
      const std::size_t nb[4] = {
          y > 0 ? i - seg.width : n, y + 1 < seg.height ? i + seg.width : n,
          x > 0 ? i - 1 : n, x + 1 < seg.width ? i + 1 : n};
      for (std::size_t j : nb) {
        if (j < n && !seen[j] && seg.labels[j] == l) {
          seen[j] = 1;
          q.push(j);
        }
      }
    }
    if (reached != size[l]) return false;
  }
  return true;
}

}  // namespace anomaly
