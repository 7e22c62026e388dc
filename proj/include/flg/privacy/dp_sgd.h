// Copyright 2026 The FLG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLG_PRIVACY_DP_SGD_H_
#define FLG_PRIVACY_DP_SGD_H_

#include <cstdint>
#include <functional>

#include "flg/common/rng.h"
#include "flg/privacy/ledger.h"
#include "flg/tensor/model.h"

namespace flg {

struct DpSgdConfig {
  double clip_bound = 1.0;        // S
  double noise_multiplier = 1.0;  // sigma
  double sampling_prob = 1.0;     // p, in (0, 1]
  uint32_t epochs = 1;            // E
  double lr = 0.1;                // eta
  // Noise stddev is sigma * S when true (standard DP-SGD; required for the
  // accountant) and the absolute sigma otherwise.
  bool noise_scales_with_S = true;

  void Validate() const;
  // ceil(1 / p) Poisson-sampled steps per epoch.
  uint64_t StepsPerEpoch() const;
  double NoiseStddev() const {
    return noise_scales_with_S ? noise_multiplier * clip_bound : noise_multiplier;
  }
};

struct DpSgdResult {
  ParamVector model;
  uint64_t steps = 0;        // including empty steps
  uint64_t empty_steps = 0;  // empty Poisson batches (noise still applied)
  double max_clipped_norm = 0.0;
};

// Called with every per-example gradient after clipping; test hook.
using ClippedGradObserver = std::function<void(const ParamVector&)>;

// Local DP-SGD. Each step Poisson-samples the dataset with rate p, clips every
// per-example gradient to S, adds Gaussian noise to the sum, divides by the
// expected batch size p * |D| and takes an SGD step. When noise scales with S
// the whole run is charged to `ledger` (if given) as E * ceil(1/p) steps of
// the (p, sigma) sampled Gaussian.
DpSgdResult DpSgdTrain(const ParamVector& model, const ModelArch& arch,
                       const Dataset& dataset, const DpSgdConfig& cfg,
                       PrivacyLedger* ledger, RngStream& rng,
                       const ClippedGradObserver& observer = nullptr);

}  // namespace flg

#endif  // FLG_PRIVACY_DP_SGD_H_
