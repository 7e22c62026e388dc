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

#ifndef FLG_FL_CLIENT_H_
#define FLG_FL_CLIENT_H_

#include <string_view>

#include "flg/common/rng.h"
#include "flg/privacy/dp_sgd.h"
#include "flg/privacy/ledger.h"
#include "flg/tensor/model.h"

namespace flg {

enum class BehaviorTag { kHonest, kLdp, kAttacker };

std::string_view BehaviorTagName(BehaviorTag tag);

// What a participant sends back: theta_local - theta_received.
struct ClientUpdate {
  ParamVector delta;
  size_t n_examples = 0;
  size_t client_id = 0;
  BehaviorTag behavior = BehaviorTag::kHonest;
};

struct LocalTrainingConfig {
  uint32_t epochs = 1;
  size_t batch_size = 10;
  double lr = 0.1;
};

// Minibatch SGD from `model`: every epoch reshuffles the shard and walks it in
// batches of `batch_size` (the last one may be short). When clip_bound > 0
// the cumulative displacement from `model` is re-projected onto the
// clip_bound ball after every step.
ParamVector LocalSgd(const ParamVector& model, const ModelArch& arch,
                     const Dataset& shard, const LocalTrainingConfig& cfg,
                     RngStream& rng, double clip_bound = 0.0);

ClientUpdate ClientUpdateHonest(const ParamVector& global, const ModelArch& arch,
                                const Dataset& shard,
                                const LocalTrainingConfig& cfg, size_t client_id,
                                RngStream& rng);

// DP-SGD local training; the run is charged to `ledger` when non-null.
ClientUpdate ClientUpdateLdp(const ParamVector& global, const ModelArch& arch,
                             const Dataset& shard, const DpSgdConfig& cfg,
                             PrivacyLedger* ledger, size_t client_id,
                             RngStream& rng);

// Participant-side clipping for central DP: ||delta||_2 <= S on return.
ClientUpdate ClientUpdateClipped(const ParamVector& global, const ModelArch& arch,
                                 const Dataset& shard,
                                 const LocalTrainingConfig& cfg, double clip_bound,
                                 size_t client_id, RngStream& rng);

}  // namespace flg

#endif  // FLG_FL_CLIENT_H_
