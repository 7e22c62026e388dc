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

#ifndef FLG_DATA_POISON_H_
#define FLG_DATA_POISON_H_

#include <functional>

#include "flg/common/rng.h"
#include "flg/data/example.h"

namespace flg {

// Single-feature backdoor trigger.
struct TriggerSpec {
  size_t pixel_index = 0;
  double trigger_value = 1.0;
  size_t target_label = 0;
  double poison_fraction = 1.0;  // in (0, 1]; 0 is accepted as a no-op
};

// Sets feature[pixel_index] = trigger_value and label = target_label on a
// uniformly chosen subset of round(poison_fraction * n) examples and flags
// them as backdoored. Everything else is left bit-identical.
Dataset ApplyTrigger(const Dataset& dataset, const TriggerSpec& trigger,
                     RngStream& rng);

// Held-out evaluation set for backdoor accuracy: every example whose true
// label differs from the target, with the trigger applied.
Dataset TriggeredTestSet(const Dataset& clean, const TriggerSpec& trigger);

using ExamplePredicate = std::function<bool(const Example&)>;

// Relabels every example matching `predicate` to `target_label` and flags it
// as backdoored. Throws InvalidArgument when nothing matches.
Dataset SemanticRelabel(const Dataset& dataset, const ExamplePredicate& predicate,
                        size_t target_label);

}  // namespace flg

#endif  // FLG_DATA_POISON_H_
