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

#ifndef ANOMALY_EXTERNAL_MODEL_H_
#define ANOMALY_EXTERNAL_MODEL_H_

#include <sys/types.h>

#include <mutex>
#include <string>
#include <vector>

#include "anomaly/feature_model.h"

namespace anomaly {

// Feature model served by a child process speaking line-delimited JSON on
// stdin/stdout. Used to attach pretrained backbones without linking them.
//
// Handshake (adapter -> us, first line):
//   {"model_id": "...", "feature_dim": D}
// Requests (one JSON object per line), answered with one line each:
//   {"op": "forward", "shape": [H, W, C], "pixels": [...]}
//       -> {"features": [...]}
//   {"op": "loss_gradient", "shape": [H, W, C], "pixels": [...],
//    "reference": [...]}
//       -> {"loss": L, "gradient": [...]}
// Any reply may instead be {"error": "message"}. Pixels are HWC floats in
// [0, 1]; adapters own any backbone-specific normalisation and the choice of
// feature tap point. A null entry in "features" or "gradient" stands for a
// non-finite value and fails the measurement as a numeric error.
//
// Calls are serialised through a mutex, so one instance may be shared by
// several workers.
class ExternalProcessModel final : public FeatureModel {
 public:
  // argv[0] is resolved through PATH. `options` is forwarded verbatim as a
  // JSON object in an initial {"op": "configure", ...} request when
  // non-empty.
  explicit ExternalProcessModel(std::vector<std::string> argv,
                                std::string options_json = {});
  ~ExternalProcessModel() override;

  ExternalProcessModel(const ExternalProcessModel&) = delete;
  ExternalProcessModel& operator=(const ExternalProcessModel&) = delete;

  const std::string& model_id() const override { return model_id_; }
  std::size_t feature_dim() const override { return feature_dim_; }
  FeatureVector forward(const ImageTensor& x) const override;
  std::vector<double> loss_gradient(const FeatureVector& reference,
                                    const ImageTensor& probe) const override;
  LossAndGradient loss_and_gradient(const FeatureVector& reference,
                                    const ImageTensor& probe) const override;

 private:
  std::string round_trip(const std::string& request_line) const;
  void shutdown() noexcept;

  pid_t child_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable std::string read_buffer_;
  mutable std::mutex mutex_;
  std::string model_id_;
  std::size_t feature_dim_ = 0;
};

}  // namespace anomaly

#endif  // ANOMALY_EXTERNAL_MODEL_H_
