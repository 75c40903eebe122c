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

#include "anomaly/vulnerability.h"

#include <cmath>

#include "anomaly/errors.h"

namespace anomaly {

void AttackConfig::validate(const Shape& shape) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InputError("attack alpha must be a positive finite number");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InputError("attack delta must be a non-negative finite number");
  }
  if (steps < 1) throw InputError("attack needs J >= 1 steps");
  if (mask) {
    if (mask->size() != shape.size()) {
      throw InputError("attack mask has " + std::to_string(mask->size()) +
                       " entries, image has " + std::to_string(shape.size()));
    }
    bool any = false;
    for (std::uint8_t m : *mask) {
      if (m > 1) throw InputError("attack mask must be binary");
      any = any || m == 1;
    }
    if (!any) throw InputError("attack mask selects no pixels");
  }
}

AttackResult vulnerability(const FeatureModel& model, const ImageTensor& x,
                           const AttackConfig& cfg, std::string_view material) {
  return vulnerability_from(model, x, cfg,
                            sample_unit_direction(material, x.shape()));
}

AttackResult vulnerability_from(const FeatureModel& model,
                                const ImageTensor& x, const AttackConfig& cfg,
                                const RandomDirection& start_direction) {
  cfg.validate(x.shape());
  if (start_direction.shape != x.shape()) {
    throw InputError("vulnerability: direction shape does not match image '" +
                     x.id() + "'");
  }
  const std::string context = "image '" + x.id() + "'";
  const std::uint8_t* mask = cfg.mask ? cfg.mask->data() : nullptr;
  const std::size_t n = x.size();
  const auto base = x.pixels();

  const FeatureVector reference =
      with_context(context, [&] { return model.forward(x); });
  if (!all_finite(reference.values)) {
    throw NumericError(context + ": non-finite reference feature");
  }

  std::vector<double> iterate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double offset =
        (mask == nullptr || mask[i]) ? cfg.delta * start_direction.values[i] : 0.0;
    iterate[i] = clip01(base[i] + offset);
  }

  AttackResult out;
  out.per_step_distance.reserve(cfg.steps);
  for (int j = 0; j < cfg.steps; ++j) {
    const ImageTensor probe(x.id(), x.shape(), iterate);
    LossAndGradient lg = with_context(
        context, [&] { return model.loss_and_gradient(reference, probe); });
    if (j > 0) out.per_step_distance.push_back(lg.loss);

    std::vector<double>& g = lg.gradient;
    if (g.size() != n || !all_finite(g)) {
      throw NumericError(context + ": non-finite gradient at attack step " +
                         std::to_string(j));
    }
    if (mask != nullptr) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) g[i] = 0.0;
      }
    }
    const double norm = l2_norm(g);
    if (norm < kMinGradientNorm) {
      out.terminated_early = true;
      if (j == 0) {
        out.vulnerability = lg.loss;
        out.final_iterate = std::move(iterate);
        return out;
      }
      break;
    }
    const double scale = cfg.alpha / norm;
    for (std::size_t i = 0; i < n; ++i) {
      iterate[i] = clip01(iterate[i] + scale * g[i]);
    }
  }

  if (!out.terminated_early) {
    const ImageTensor final_probe(x.id(), x.shape(), iterate);
    const FeatureVector f =
        with_context(context, [&] { return model.forward(final_probe); });
    if (!all_finite(f.values)) {
      throw NumericError(context + ": non-finite feature after attack");
    }
    out.per_step_distance.push_back(l2_distance(f.values, reference.values));
  }
  out.vulnerability = out.per_step_distance.back();
  out.final_iterate = std::move(iterate);
  return out;
}

}  // namespace anomaly
