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

#ifndef FLG_ADVERSARY_BACKDOOR_H_
#define FLG_ADVERSARY_BACKDOOR_H_

#include <string_view>

#include "flg/common/rng.h"
#include "flg/data/poison.h"
#include "flg/fl/client.h"
#include "flg/tensor/model.h"

namespace flg {

enum class BackdoorKind { kSinglePixel, kSemantic };
enum class BoostMode { kReplacement, kPlainPoisonedTraining };

BackdoorKind ParseBackdoorKind(std::string_view name);
std::string_view BackdoorKindName(BackdoorKind kind);
BoostMode ParseBoostMode(std::string_view name);
std::string_view BoostModeName(BoostMode mode);

struct BackdoorTask {
  BackdoorKind kind = BackdoorKind::kSinglePixel;
  TriggerSpec trigger;
  // Semantic backdoors relabel every example matching this predicate.
  ExamplePredicate predicate;
  size_t target_label = 0;
  BoostMode boost_mode = BoostMode::kReplacement;

  // Throws InvalidArgument if the trigger does not fit the feature width or
  // the target label is not a class.
  void Validate(size_t feature_width, size_t num_classes) const;
};

// The attacker's shard with the backdoor applied according to the task.
Dataset PoisonShard(const Dataset& shard, const BackdoorTask& task, RngStream& rng);

// delta = n_total / (eta * n_attacker) * (theta_star - theta_r). Sent by every
// attacker, plain averaging of these plus zero benign deltas lands on
// theta_star exactly.
ClientUpdate BackdoorReplacementUpdate(const ParamVector& theta_star,
                                       const ParamVector& theta_r, double n_total,
                                       double n_attacker, double eta,
                                       size_t client_id = 0);

// Local SGD of the received global model on the poisoned shard.
ParamVector TrainBackdooredModel(const ParamVector& global, const ModelArch& arch,
                                 const Dataset& poisoned_shard,
                                 const LocalTrainingConfig& cfg, RngStream& rng);

// Fraction of triggered inputs classified as the target label. Throws on an
// empty test set.
double BackdoorAccuracy(const ParamVector& model, const ModelArch& arch,
                        const Dataset& triggered_testset, size_t target_label);

}  // namespace flg

#endif  // FLG_ADVERSARY_BACKDOOR_H_
