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

#include "anomaly/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "anomaly/errors.h"

namespace anomaly {
namespace {

void check_sample(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InputError(std::string(what) + ": non-finite value at index " +
                       std::to_string(i));
    }
  }
}

// Continued fraction for I_x(a, b) (modified Lentz), valid for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge");
}

double t_p_value(double t, double df, Tail tail) {
  if (!(df > 0.0)) throw NumericError("t test: non-positive degrees of freedom");
  if (std::isinf(t)) {
    switch (tail) {
      case Tail::kLess:
        return t < 0 ? 0.0 : 1.0;
      case Tail::kGreater:
        return t > 0 ? 0.0 : 1.0;
      case Tail::kTwoSided:
        return 0.0;
    }
  }
  switch (tail) {
    case Tail::kLess:
      return student_t_cdf(t, df);
    case Tail::kGreater:
      return student_t_cdf(-t, df);
    case Tail::kTwoSided: {
      const double t2 = t * t;
      const double p = incomplete_beta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
      return std::clamp(p, 0.0, 1.0);
    }
  }
  return 1.0;
}

void check_t_inputs(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw InputError("t test needs at least two values per sample");
  }
  check_sample(a, "t test sample a");
  check_sample(b, "t test sample b");
}

}  // namespace

std::string_view to_string(Tail t) {
  switch (t) {
    case Tail::kLess:
      return "less";
    case Tail::kGreater:
      return "greater";
    case Tail::kTwoSided:
      return "two_sided";
  }
  return "?";
}

Tail parse_tail(std::string_view s) {
  if (s == "less") return Tail::kLess;
  if (s == "greater") return Tail::kGreater;
  if (s == "two_sided" || s == "two-sided" || s == "two") return Tail::kTwoSided;
  throw InputError("unknown tail '" + std::string(s) + "'");
}

double incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw InputError("student_t_cdf: df must be > 0");
  if (std::isnan(t)) throw NumericError("student_t_cdf: NaN argument");
  if (t == 0.0) return 0.5;
  const double t2 = t * t;
  const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
  return t > 0.0 ? 1.0 - tail : tail;
}

double mean(std::span<const double> v) {
  if (v.empty()) throw InputError("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw InputError("variance needs at least two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

TTestResult welch_ttest(std::span<const double> a, std::span<const double> b,
                        Tail tail) {
  check_t_inputs(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  if (va == 0.0 && vb == 0.0) {
    throw InputError("t test: both samples have zero variance");
  }
  const double se2 = va + vb;
  TTestResult out;
  out.tail = tail;
  out.t_statistic = (mean(a) - mean(b)) / std::sqrt(se2);
  out.degrees_of_freedom =
      se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  out.p_value = t_p_value(out.t_statistic, out.degrees_of_freedom, tail);
  return out;
}

TTestResult student_ttest(std::span<const double> a, std::span<const double> b,
                          Tail tail) {
  check_t_inputs(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ss = sample_variance(a) * (na - 1.0) + sample_variance(b) * (nb - 1.0);
  if (ss == 0.0) throw InputError("t test: both samples have zero variance");
  const double df = na + nb - 2.0;
  const double pooled = ss / df;
  TTestResult out;
  out.tail = tail;
  out.pooled = true;
  out.degrees_of_freedom = df;
  out.t_statistic = (mean(a) - mean(b)) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  out.p_value = t_p_value(out.t_statistic, df, tail);
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("pearson: length mismatch");
  if (xs.size() < 2) throw InputError("pearson: needs at least two pairs");
  check_sample(xs, "pearson xs");
  check_sample(ys, "pearson ys");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InputError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    // positions i..j-1 (0-based) -> ranks i+1..j
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("spearman: length mismatch");
  check_sample(xs, "spearman xs");
  check_sample(ys, "spearman ys");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.size() < 2) throw InputError("minmax_normalize: needs >= 2 values");
  check_sample(values, "minmax_normalize");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw InputError("minmax_normalize: max equals min");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - lo) / (hi - lo);
  }
  return out;
}

}  // namespace anomaly
