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

#ifndef FLG_ADVERSARY_MIA_H_
#define FLG_ADVERSARY_MIA_H_

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "flg/adversary/attack_model.h"
#include "flg/common/rng.h"
#include "flg/fl/engine.h"
#include "flg/tensor/model.h"

namespace flg {

enum class MiaRole { kLocal, kGlobal };
enum class MiaMode {
  kPassive,
  kActiveGradientAscent,
  kIsolating,
  kIsolatingGradientAscent,
};

MiaRole ParseMiaRole(std::string_view name);
std::string_view MiaRoleName(MiaRole role);
MiaMode ParseMiaMode(std::string_view name);
std::string_view MiaModeName(MiaMode mode);

struct MiaFeatureSet {
  bool loss = true;
  bool confidence = true;
  bool grad_norm = true;
  // Appends the flattened per-example gradient; only sensible for small models.
  bool full_gradient = false;
};

struct MiaConfig {
  MiaRole role = MiaRole::kLocal;
  MiaMode mode = MiaMode::kPassive;
  double ascent_lr = 1.0;        // gamma
  double active_fraction = 0.4;  // ascent and isolation run in the final part
  size_t num_snapshots = 5;      // most recent observed models used as features
  size_t attacker_client = 0;    // local role
  size_t target_client = 1;      // global role
  MiaFeatureSet features;

  // Isolating modes with a local attacker are rejected.
  void Validate() const;
  bool uses_ascent() const {
    return mode == MiaMode::kActiveGradientAscent ||
           mode == MiaMode::kIsolatingGradientAscent;
  }
  bool uses_isolation() const {
    return mode == MiaMode::kIsolating || mode == MiaMode::kIsolatingGradientAscent;
  }
};

// True when `round` (0-based) lies in the final active_fraction of the run.
bool MiaActiveRound(size_t round, size_t total_rounds, double active_fraction);

// Per snapshot: loss at the point, max softmax confidence, per-example
// gradient norm (subject to `set`), concatenated over snapshots.
std::vector<double> MiaFeatures(std::span<const ParamVector> snapshots,
                                const ModelArch& arch, const Example& point,
                                const MiaFeatureSet& set = {});

// Attack classifier on precomputed features: 50/50 disjoint split of each
// class, logistic regression, held-out accuracy and AUC.
AttackReport MiaAttackOnFeatures(const FeatureMatrix& member_features,
                                 const FeatureMatrix& nonmember_features,
                                 RngStream& rng);

// Everything the attacker saw during one run.
struct MiaTrace {
  ModelArch arch;
  std::vector<ParamVector> snapshots;  // oldest first
  Dataset members;
  Dataset nonmembers;
  size_t rounds = 0;
  size_t isolated_rounds = 0;
  // Rounds in which the isolated target received anything but its own echo.
  size_t isolation_violations = 0;
};

// Membership attack over a recorded trace. Members and non-members must be
// disjoint and of equal size.
AttackReport MiaRun(const MiaTrace& trace, const MiaConfig& cfg, RngStream& rng);

// Mean loss gradient over `targets`; the ascent direction.
ParamVector AscentGradient(const ParamVector& model, const ModelArch& arch,
                           const Dataset& targets);

// Stateful adversary wired into the round hooks. Local attackers tamper with
// their own update and observe each global model with their own weighted
// contribution removed (plain averaging at `server_lr` assumed); global
// attackers tamper with and isolate the target's view and observe its local
// models.
class MiaAdversary {
 public:
  MiaAdversary(MiaConfig cfg, ModelArch arch, Dataset ascent_targets,
               size_t total_rounds, double server_lr = 1.0);

  const MiaConfig& config() const { return cfg_; }

  // Local role: adds gamma * ascent gradient to the attacker's update.
  void TamperUpdate(size_t round, const ParamVector& view, ClientUpdate& update) const;
  // Global role: ascent applied to the target's received model.
  void TamperView(size_t round, size_t client_id, ParamVector& view) const;
  std::vector<size_t> Isolated(size_t round) const;
  void Observe(size_t round, const FlState& before,
               std::span<const ClientUpdate> updates,
               const std::map<size_t, ParamVector>& views,
               const ParamVector& new_global);

  MiaTrace Trace(Dataset members, Dataset nonmembers) const;

 private:
  bool Active(size_t round) const {
    return MiaActiveRound(round, total_rounds_, cfg_.active_fraction);
  }

  MiaConfig cfg_;
  ModelArch arch_;
  Dataset targets_;
  size_t total_rounds_;
  double server_lr_;
  std::vector<ParamVector> snapshots_;
  size_t rounds_seen_ = 0;
  size_t isolated_rounds_ = 0;
  size_t isolation_violations_ = 0;
};

}  // namespace flg

#endif  // FLG_ADVERSARY_MIA_H_
