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

#ifndef ANOMALY_STATS_H_
#define ANOMALY_STATS_H_

#include <span>
#include <string_view>
#include <vector>

namespace anomaly {

// Alternative hypothesis of a two-sample t test, phrased for mean(a) vs
// mean(b).
enum class Tail { kLess, kGreater, kTwoSided };

std::string_view to_string(Tail t);
Tail parse_tail(std::string_view s);

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  Tail tail = Tail::kTwoSided;
  bool pooled = false;  // false: Welch, true: pooled-variance Student
};

// Welch's unequal-variance t test with Welch-Satterthwaite degrees of
// freedom. Each sample needs >= 2 values and at least one of them nonzero
// variance.
TTestResult welch_ttest(std::span<const double> a, std::span<const double> b,
                        Tail tail);

// Pooled-variance Student t test, for sensitivity checks.
TTestResult student_ttest(std::span<const double> a, std::span<const double> b,
                          Tail tail);

// Regularised incomplete beta I_x(a, b); `y` must equal 1 - x and is passed
// separately so callers can supply it without cancellation.
double incomplete_beta(double a, double b, double x, double y);

// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

double mean(std::span<const double> v);
// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> v);

double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

std::vector<double> minmax_normalize(std::span<const double> values);

}  // namespace anomaly

#endif  // ANOMALY_STATS_H_
