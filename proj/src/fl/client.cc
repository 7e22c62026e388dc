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

#include "flg/fl/client.h"

#include <algorithm>
#include <numeric>

#include "flg/common/error.h"
#include "flg/privacy/mechanisms.h"

namespace flg {

std::string_view BehaviorTagName(BehaviorTag tag) {
  switch (tag) {
    case BehaviorTag::kHonest:
      return "honest";
    case BehaviorTag::kLdp:
      return "ldp";
    case BehaviorTag::kAttacker:
      return "attacker";
  }
  return "honest";
}

ParamVector LocalSgd(const ParamVector& model, const ModelArch& arch,
                     const Dataset& shard, const LocalTrainingConfig& cfg,
                     RngStream& rng, double clip_bound) {
  if (shard.empty()) throw InvalidArgument("LocalSgd: empty shard");
  if (cfg.batch_size == 0) throw InvalidArgument("LocalSgd: batch size must be positive");
  if (cfg.lr < 0.0) throw InvalidArgument("LocalSgd: negative learning rate");
  ParamVector theta = model;
  std::vector<size_t> order(shard.size());
  std::vector<Example> batch;
  batch.reserve(cfg.batch_size);
  for (uint32_t e = 0; e < cfg.epochs; ++e) {
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(order);
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (size_t i = start; i < end; ++i) batch.push_back(shard.examples[order[i]]);
      const LossAndGradient lg = LossAndGrad(theta, arch, batch);
      theta.AddScaled(lg.grad, -cfg.lr);
      if (clip_bound > 0.0) {
        ParamVector delta = theta - model;
        ClipInPlace(delta, clip_bound);
        theta = model + delta;
      }
    }
  }
  if (!theta.AllFinite()) throw DivergenceError("local training diverged");
  return theta;
}

ClientUpdate ClientUpdateHonest(const ParamVector& global, const ModelArch& arch,
                                const Dataset& shard,
                                const LocalTrainingConfig& cfg, size_t client_id,
                                RngStream& rng) {
  ParamVector local = LocalSgd(global, arch, shard, cfg, rng);
  return {local - global, shard.size(), client_id, BehaviorTag::kHonest};
}

ClientUpdate ClientUpdateLdp(const ParamVector& global, const ModelArch& arch,
                             const Dataset& shard, const DpSgdConfig& cfg,
                             PrivacyLedger* ledger, size_t client_id,
                             RngStream& rng) {
  DpSgdResult r = DpSgdTrain(global, arch, shard, cfg, ledger, rng);
  return {r.model - global, shard.size(), client_id, BehaviorTag::kLdp};
}

ClientUpdate ClientUpdateClipped(const ParamVector& global, const ModelArch& arch,
                                 const Dataset& shard,
                                 const LocalTrainingConfig& cfg, double clip_bound,
                                 size_t client_id, RngStream& rng) {
  if (!(clip_bound > 0.0)) throw InvalidArgument("clip bound must be positive");
  ParamVector local = LocalSgd(global, arch, shard, cfg, rng, clip_bound);
  ClientUpdate u{local - global, shard.size(), client_id, BehaviorTag::kHonest};
  // theta_r + delta - theta_r can round past S by an ulp.
  ClipInPlace(u.delta, clip_bound);
  return u;
}

}  // namespace flg
