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

#include "flg/privacy/dp_sgd.h"

#include <algorithm>
#include <cmath>

#include "flg/common/error.h"
#include "flg/privacy/mechanisms.h"

namespace flg {

void DpSgdConfig::Validate() const {
  if (!(clip_bound > 0.0)) throw InvalidArgument("DP-SGD clip bound must be positive");
  if (!(noise_multiplier >= 0.0)) throw InvalidArgument("DP-SGD noise must be >= 0");
  if (!(sampling_prob > 0.0 && sampling_prob <= 1.0)) {
    throw InvalidArgument("DP-SGD sampling probability must be in (0, 1]");
  }
  if (epochs == 0) throw InvalidArgument("DP-SGD epochs must be positive");
  if (!(lr > 0.0)) throw InvalidArgument("DP-SGD learning rate must be positive");
}

uint64_t DpSgdConfig::StepsPerEpoch() const {
  return static_cast<uint64_t>(std::ceil(1.0 / sampling_prob - 1e-12));
}

DpSgdResult DpSgdTrain(const ParamVector& model, const ModelArch& arch,
                       const Dataset& dataset, const DpSgdConfig& cfg,
                       PrivacyLedger* ledger, RngStream& rng,
                       const ClippedGradObserver& observer) {
  cfg.Validate();
  if (dataset.empty()) throw InvalidArgument("DpSgdTrain: empty dataset");
  DpSgdResult result{model, 0, 0, 0.0};
  const double expected_batch = cfg.sampling_prob * static_cast<double>(dataset.size());
  const double stddev = cfg.NoiseStddev();
  const uint64_t steps_per_epoch = cfg.StepsPerEpoch();
  RngStream sample_rng = rng.Derive("dpsgd/sample");
  RngStream noise_rng = rng.Derive("dpsgd/noise");
  ParamVector sum = model.ZerosLike();

  for (uint32_t e = 0; e < cfg.epochs; ++e) {
    for (uint64_t s = 0; s < steps_per_epoch; ++s) {
      ++result.steps;
      std::fill(sum.values().begin(), sum.values().end(), 0.0);
      size_t taken = 0;
      for (const Example& ex : dataset.examples) {
        if (cfg.sampling_prob < 1.0 && !sample_rng.Bernoulli(cfg.sampling_prob)) {
          continue;
        }
        ParamVector g = ExampleLossAndGrad(result.model, arch, ex).grad;
        ClipInPlace(g, cfg.clip_bound);
        const double norm = g.L2Norm();
        result.max_clipped_norm = std::max(result.max_clipped_norm, norm);
        if (observer) observer(g);
        sum += g;
        ++taken;
      }
      if (taken == 0) ++result.empty_steps;
      AddGaussianNoise(sum, stddev, noise_rng);
      result.model.AddScaled(sum, -cfg.lr / expected_batch);
      if (!result.model.AllFinite()) throw DivergenceError("DP-SGD produced non-finite parameters");
    }
  }
  if (ledger != nullptr && cfg.noise_scales_with_S) {
    ledger->AccumulateSubsampledGaussian(cfg.sampling_prob, cfg.noise_multiplier,
                                         result.steps);
  }
  return result;
}

}  // namespace flg
