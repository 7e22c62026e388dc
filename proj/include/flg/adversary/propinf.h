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

#ifndef FLG_ADVERSARY_PROPINF_H_
#define FLG_ADVERSARY_PROPINF_H_

#include <functional>
#include <span>
#include <vector>

#include "flg/adversary/attack_model.h"
#include "flg/common/rng.h"
#include "flg/fl/client.h"
#include "flg/tensor/model.h"

namespace flg {

struct PropinfConfig {
  size_t num_components = 4;  // k principal components of the flat gradient
  bool layer_norms = true;    // prepend per-layer gradient norms
  size_t batch_size = 16;     // attacker's with/without batches
};

// Maps a flat gradient to (per-layer norms, projections on the top-k
// principal directions of the attacker's own gradients).
class GradientSummarizer {
 public:
  // Principal directions by power iteration with deflation. Throws on empty
  // input or k larger than the number of gradients.
  void Fit(std::span<const ParamVector> grads, const PropinfConfig& cfg, RngStream& rng);
  std::vector<double> Summarize(const ParamVector& grad) const;
  size_t width() const;
  const std::vector<std::vector<double>>& components() const { return components_; }

 private:
  bool layer_norms_ = true;
  size_t num_layers_ = 0;
  std::vector<double> mean_;
  std::vector<std::vector<double>> components_;
};

// One round from the attacker's vantage: the model it received and the
// update it attributes to the other participants.
struct PropinfObservation {
  ParamVector model;
  ParamVector observed_update;
  int truth = 0;  // 1 if the target's batch carried the property
  size_t contributors = 1;  // participants behind observed_update
};

struct PropinfSet {
  FeatureMatrix train_x;  // attacker-side summaries
  std::vector<int> train_y;
  FeatureMatrix observed_x;  // summaries of the observed updates
  std::vector<int> observed_truth;
  size_t rounds = 0;
};

// The attacker's stand-in for one participant's local step on `batch` from
// `model`, in gradient orientation (the negated update).
using LocalSimulator =
    std::function<ParamVector(const ParamVector& model, const Dataset& batch, RngStream& rng)>;

// Per round, one simulated aggregate of `contributors` local steps where one
// batch carries the property (label 1) and one where none does (label 0),
// computed at that round's model. Without a simulator the local step is the
// plain batch gradient. Observed updates are negated into gradient
// orientation. Every vector is scaled to unit norm before summarizing, so the
// classifier is insensitive to learning rates and example weights.
PropinfSet PropinfCollect(std::span<const PropinfObservation> stream,
                          const ModelArch& arch, const Dataset& aux_with,
                          const Dataset& aux_without, const PropinfConfig& cfg,
                          RngStream& rng, const LocalSimulator& simulate = nullptr);

// Batch-property classifier on the collected set; AUC over the observed
// rounds. per_round holds the classifier score of each observed update.
AttackReport PropinfRun(const PropinfSet& set, const PropinfConfig& cfg, RngStream& rng);

// Sum of the other participants' example-weighted deltas, recovered from the
// change of the global model under plain averaging.
ParamVector ObservedOthers(const ParamVector& before, const ParamVector& after,
                           double server_lr, double n_total, const ClientUpdate& own);

}  // namespace flg

#endif  // FLG_ADVERSARY_PROPINF_H_
