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

#include "flg/data/poison.h"

#include <cmath>
#include <numeric>
#include <string>

#include "flg/common/error.h"

namespace flg {
namespace {

void CheckTrigger(const Dataset& dataset, const TriggerSpec& trigger) {
  if (!dataset.empty() && trigger.pixel_index >= dataset.feature_width()) {
    throw InvalidArgument("trigger pixel " + std::to_string(trigger.pixel_index) +
                          " outside feature width " +
                          std::to_string(dataset.feature_width()));
  }
  if (dataset.num_classes != 0 && trigger.target_label >= dataset.num_classes) {
    throw InvalidArgument("trigger target label out of range");
  }
  if (!(trigger.poison_fraction >= 0.0 && trigger.poison_fraction <= 1.0)) {
    throw InvalidArgument("poison_fraction must be in [0, 1]");
  }
}

void Poison(Example& ex, const TriggerSpec& trigger) {
  ex.features[trigger.pixel_index] = trigger.trigger_value;
  ex.label = trigger.target_label;
  ex.is_backdoored = true;
}

}  // namespace

Dataset ApplyTrigger(const Dataset& dataset, const TriggerSpec& trigger,
                     RngStream& rng) {
  CheckTrigger(dataset, trigger);
  Dataset out = dataset;
  const size_t n = dataset.size();
  const size_t k = static_cast<size_t>(
      std::llround(trigger.poison_fraction * static_cast<double>(n)));
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (k < n) rng.Shuffle(idx);
  for (size_t j = 0; j < k; ++j) Poison(out.examples[idx[j]], trigger);
  return out;
}

Dataset TriggeredTestSet(const Dataset& clean, const TriggerSpec& trigger) {
  CheckTrigger(clean, trigger);
  Dataset out;
  out.num_classes = clean.num_classes;
  for (const Example& ex : clean.examples) {
    if (ex.label == trigger.target_label) continue;
    Example p = ex;
    Poison(p, trigger);
    out.examples.push_back(std::move(p));
  }
  return out;
}

Dataset SemanticRelabel(const Dataset& dataset, const ExamplePredicate& predicate,
                        size_t target_label) {
  if (dataset.num_classes != 0 && target_label >= dataset.num_classes) {
    throw InvalidArgument("SemanticRelabel: target label out of range");
  }
  Dataset out = dataset;
  size_t matched = 0;
  for (Example& ex : out.examples) {
    if (!predicate(ex)) continue;
    ex.label = target_label;
    ex.is_backdoored = true;
    ++matched;
  }
  if (matched == 0) {
    throw InvalidArgument("SemanticRelabel: predicate matches no example");
  }
  return out;
}

}  // namespace flg
