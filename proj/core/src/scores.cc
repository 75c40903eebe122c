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

#include "anomaly/scores.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "anomaly/errors.h"

namespace anomaly {
namespace {

void check_points(std::span<const Point2> s, const char* name) {
  if (s.empty()) throw InputError(std::string("ks2d: sample ") + name + " is empty");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i].x) || !std::isfinite(s[i].y)) {
      throw InputError(std::string("ks2d: non-finite coordinate in sample ") +
                       name + " at index " + std::to_string(i));
    }
  }
}

void check_values(std::span<const double> s, const char* name) {
  if (s.empty()) throw InputError(std::string("ks1d: sample ") + name + " is empty");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i])) {
      throw InputError(std::string("ks1d: non-finite value in sample ") + name +
                       " at index " + std::to_string(i));
    }
  }
}

struct QuadrantCounts {
  std::size_t le_le = 0;  // x <= ax && y <= ay
  std::size_t le_x = 0;   // x <= ax
  std::size_t le_y = 0;   // y <= ay
};

// Fenwick tree over ranks.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Sum of entries [0, count).
  std::size_t prefix(std::size_t count) const {
    std::size_t s = 0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::size_t> tree_;
};

// Quadrant counts of `sample` around every anchor.
std::vector<QuadrantCounts> count_quadrants(std::span<const Point2> anchors,
                                            std::span<const Point2> sample) {
  std::vector<double> xs(sample.size());
  std::vector<double> ys(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    xs[i] = sample[i].x;
    ys[i] = sample[i].y;
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  std::vector<std::size_t> by_x(sample.size());
  std::iota(by_x.begin(), by_x.end(), std::size_t{0});
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t l, std::size_t r) {
    return sample[l].x < sample[r].x;
  });
  std::vector<std::size_t> anchor_order(anchors.size());
  std::iota(anchor_order.begin(), anchor_order.end(), std::size_t{0});
  std::sort(anchor_order.begin(), anchor_order.end(),
            [&](std::size_t l, std::size_t r) { return anchors[l].x < anchors[r].x; });

  // Rank of each sample y among the sorted ys (first position of equal run).
  std::vector<std::size_t> y_rank(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    y_rank[i] = static_cast<std::size_t>(
        std::lower_bound(ys.begin(), ys.end(), sample[i].y) - ys.begin());
  }

  std::vector<QuadrantCounts> out(anchors.size());
  Fenwick fenwick(sample.size());
  std::size_t inserted = 0;
  for (std::size_t idx : anchor_order) {
    const Point2& p = anchors[idx];
    while (inserted < by_x.size() && sample[by_x[inserted]].x <= p.x) {
      fenwick.add(y_rank[by_x[inserted]]);
      ++inserted;
    }
    const auto y_le = static_cast<std::size_t>(
        std::upper_bound(ys.begin(), ys.end(), p.y) - ys.begin());
    QuadrantCounts& c = out[idx];
    c.le_x = inserted;
    c.le_y = y_le;
    // Every inserted point with y rank < y_le has y <= p.y.
    c.le_le = fenwick.prefix(y_le);
  }
  return out;
}

double max_quadrant_difference(std::span<const Point2> anchors,
                               std::span<const Point2> a,
                               std::span<const Point2> b) {
  const auto ca = count_quadrants(anchors, a);
  const auto cb = count_quadrants(anchors, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double best = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const std::size_t qa[4] = {ca[i].le_le, ca[i].le_x - ca[i].le_le,
                               ca[i].le_y - ca[i].le_le,
                               a.size() - ca[i].le_x - ca[i].le_y + ca[i].le_le};
    const std::size_t qb[4] = {cb[i].le_le, cb[i].le_x - cb[i].le_le,
                               cb[i].le_y - cb[i].le_le,
                               b.size() - cb[i].le_x - cb[i].le_y + cb[i].le_le};
    for (int q = 0; q < 4; ++q) {
      const double d = std::fabs(static_cast<double>(qa[q]) / na -
                                 static_cast<double>(qb[q]) / nb);
      best = std::max(best, d);
    }
  }
  return best;
}

void check_comparable(std::span<const MeasureRecord> real,
                      std::span<const MeasureRecord> generated) {
  if (real.empty()) throw InputError("anomaly_score: no reference records");
  if (generated.empty()) throw InputError("anomaly_score: no generated records");
  const std::string& model = real.front().model_id;
  const std::string& params = real.front().params_hash;
  auto check = [&](std::span<const MeasureRecord> records, const char* which) {
    for (const auto& r : records) {
      if (r.model_id != model) {
        throw InputError(std::string("anomaly_score: ") + which + " record '" +
                         r.image_id + "' has model_id " + r.model_id +
                         ", expected " + model);
      }
      if (r.params_hash != params) {
        throw InputError(std::string("anomaly_score: ") + which + " record '" +
                         r.image_id + "' has params_hash " + r.params_hash +
                         ", expected " + params);
      }
    }
  };
  check(real, "reference");
  check(generated, "generated");
}

}  // namespace

std::string_view to_string(KsCombine c) {
  return c == KsCombine::kAverage ? "average" : "max";
}

std::string_view to_string(ScoreMode m) {
  switch (m) {
    case ScoreMode::k2d:
      return "2d";
    case ScoreMode::kComplexity1d:
      return "complexity_1d";
    case ScoreMode::kVulnerability1d:
      return "vulnerability_1d";
  }
  return "?";
}

KsCombine parse_ks_combine(std::string_view s) {
  if (s == "average") return KsCombine::kAverage;
  if (s == "max") return KsCombine::kMax;
  throw InputError("unknown KS combination '" + std::string(s) + "'");
}

ScoreMode parse_score_mode(std::string_view s) {
  if (s == "2d") return ScoreMode::k2d;
  if (s == "complexity" || s == "complexity_1d") return ScoreMode::kComplexity1d;
  if (s == "vulnerability" || s == "vulnerability_1d") {
    return ScoreMode::kVulnerability1d;
  }
  throw InputError("unknown score mode '" + std::string(s) + "'");
}

double ks2d(std::span<const Point2> a, std::span<const Point2> b,
            KsCombine combine) {
  check_points(a, "a");
  check_points(b, "b");
  const double d1 = max_quadrant_difference(a, a, b);
  const double d2 = max_quadrant_difference(b, a, b);
  return combine == KsCombine::kAverage ? (d1 + d2) / 2.0 : std::max(d1, d2);
}

double ks1d(std::span<const double> a, std::span<const double> b) {
  check_values(a, "a");
  check_values(b, "b");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double t;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      t = sa[i];
    } else {
      t = sb[j];
    }
    while (i < sa.size() && sa[i] <= t) ++i;
    while (j < sb.size() && sb[j] <= t) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / na -
                                    static_cast<double>(j) / nb));
  }
  return best;
}

ScoreResult anomaly_score(std::span<const MeasureRecord> real,
                          std::span<const MeasureRecord> generated,
                          ScoreMode mode, KsCombine combine) {
  check_comparable(real, generated);
  ScoreResult out;
  out.mode = mode;
  out.combine = combine;
  out.n_real = real.size();
  out.n_generated = generated.size();
  if (mode == ScoreMode::k2d) {
    std::vector<Point2> pa;
    std::vector<Point2> pb;
    for (const auto& r : real) pa.push_back({r.complexity, r.vulnerability});
    for (const auto& r : generated) pb.push_back({r.complexity, r.vulnerability});
    out.value = ks2d(pa, pb, combine);
  } else {
    const bool use_c = mode == ScoreMode::kComplexity1d;
    std::vector<double> va;
    std::vector<double> vb;
    for (const auto& r : real) va.push_back(use_c ? r.complexity : r.vulnerability);
    for (const auto& r : generated) {
      vb.push_back(use_c ? r.complexity : r.vulnerability);
    }
    out.value = ks1d(va, vb);
  }
  return out;
}

double asi(const MeasureRecord& record) {
  if (!(record.complexity > kMinAsiComplexity)) {
    throw NumericError("degenerate complexity for image '" + record.image_id +
                       "'");
  }
  return record.vulnerability / record.complexity;
}

double mean_asi(std::span<const MeasureRecord> records) {
  if (records.empty()) throw InputError("mean_asi: no records");
  double sum = 0.0;
  for (const auto& r : records) sum += asi(r);
  return sum / static_cast<double>(records.size());
}

}  // namespace anomaly
