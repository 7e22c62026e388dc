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

#include "flg/adversary/backdoor.h"

#include <string>

#include "flg/common/error.h"

namespace flg {

BackdoorKind ParseBackdoorKind(std::string_view name) {
  if (name == "single_pixel") return BackdoorKind::kSinglePixel;
  if (name == "semantic") return BackdoorKind::kSemantic;
  throw InvalidArgument("unknown backdoor kind '" + std::string(name) + "'");
}

std::string_view BackdoorKindName(BackdoorKind kind) {
  return kind == BackdoorKind::kSemantic ? "semantic" : "single_pixel";
}

BoostMode ParseBoostMode(std::string_view name) {
  if (name == "replacement") return BoostMode::kReplacement;
  if (name == "plain_poisoned_training") return BoostMode::kPlainPoisonedTraining;
  throw InvalidArgument("unknown boost mode '" + std::string(name) + "'");
}

std::string_view BoostModeName(BoostMode mode) {
  return mode == BoostMode::kReplacement ? "replacement" : "plain_poisoned_training";
}

void BackdoorTask::Validate(size_t feature_width, size_t num_classes) const {
  if (target_label >= num_classes) {
    throw InvalidArgument("backdoor target label " + std::to_string(target_label) +
                          " out of range for " + std::to_string(num_classes) +
                          " classes");
  }
  if (kind == BackdoorKind::kSinglePixel) {
    if (trigger.pixel_index >= feature_width) {
      throw InvalidArgument("trigger index " + std::to_string(trigger.pixel_index) +
                            " outside feature width " + std::to_string(feature_width));
    }
    if (trigger.target_label != target_label) {
      throw InvalidArgument("trigger and task disagree on the target label");
    }
    if (!(trigger.poison_fraction >= 0.0 && trigger.poison_fraction <= 1.0)) {
      throw InvalidArgument("poison fraction must be in [0, 1]");
    }
  } else if (!predicate) {
    throw InvalidArgument("semantic backdoor needs a predicate");
  }
}

Dataset PoisonShard(const Dataset& shard, const BackdoorTask& task, RngStream& rng) {
  if (task.kind == BackdoorKind::kSemantic) {
    return SemanticRelabel(shard, task.predicate, task.target_label);
  }
  return ApplyTrigger(shard, task.trigger, rng);
}

ClientUpdate BackdoorReplacementUpdate(const ParamVector& theta_star,
                                       const ParamVector& theta_r, double n_total,
                                       double n_attacker, double eta,
                                       size_t client_id) {
  if (!(n_attacker >= 1.0)) throw InvalidArgument("n_attacker must be >= 1");
  if (!(eta > 0.0)) throw InvalidArgument("server learning rate must be positive");
  if (!(n_total >= n_attacker)) throw InvalidArgument("n_total must be >= n_attacker");
  ClientUpdate u;
  u.delta = theta_star - theta_r;
  u.delta *= n_total / (eta * n_attacker);
  u.n_examples = static_cast<size_t>(n_attacker);
  u.client_id = client_id;
  u.behavior = BehaviorTag::kAttacker;
  return u;
}

ParamVector TrainBackdooredModel(const ParamVector& global, const ModelArch& arch,
                                 const Dataset& poisoned_shard,
                                 const LocalTrainingConfig& cfg, RngStream& rng) {
  if (poisoned_shard.empty()) throw InvalidArgument("attacker shard is empty");
  return LocalSgd(global, arch, poisoned_shard, cfg, rng);
}

double BackdoorAccuracy(const ParamVector& model, const ModelArch& arch,
                        const Dataset& triggered_testset, size_t target_label) {
  if (triggered_testset.empty()) throw InvalidArgument("backdoor test set is empty");
  size_t hits = 0;
  for (const Example& ex : triggered_testset.examples) {
    if (PredictLabel(model, arch, ex.features) == target_label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(triggered_testset.size());
}

}  // namespace flg
