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

#ifndef FLG_FL_ENGINE_H_
#define FLG_FL_ENGINE_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flg/common/rng.h"
#include "flg/fl/aggregate.h"
#include "flg/fl/client.h"
#include "flg/privacy/cdp.h"
#include "flg/privacy/ledger.h"

namespace flg {

struct SelectionSpec {
  enum class Mode { kFixedK, kProbability };
  Mode mode = Mode::kFixedK;
  size_t k = 1;
  double q = 1.0;
};

// Sorted client ids. Fixed-K draws K of N without replacement; probability
// mode keeps each client independently with probability q. Throws when
// K > N or q is outside (0, 1].
std::vector<size_t> SelectClients(size_t n_clients, const SelectionSpec& selection,
                                  RngStream& rng);

struct ServerConfig {
  AggregatorKind aggregator = AggregatorKind::kPlain;
  double server_lr = 1.0;
  double norm_threshold = 1.0;  // norm_bound and weak_dp
  double weak_dp_sigma = 0.0;
  CdpConfig cdp;
  size_t rounds = 1;
  SelectionSpec selection;

  void Validate(size_t n_clients) const;
};

struct RoundRecord {
  size_t round = 0;
  double main_accuracy = 0.0;
  std::optional<double> backdoor_accuracy;
  std::optional<double> eps_spent;
  std::optional<double> attack_metric;
  // Honest selection, and the participant list after adversary overrides.
  std::vector<size_t> selected;
  std::vector<size_t> participants;
  std::vector<size_t> isolated;
  AggregateDiagnostics diagnostics;
};

// Server state carried between rounds.
struct FlState {
  ParamVector global;
  size_t round = 0;
  PrivacyLedger ledger;                           // server-side (weak DP, CDP)
  std::map<size_t, PrivacyLedger> client_ledgers;  // LDP, per participant
  std::map<size_t, ParamVector> last_local;        // view + delta of last round
  bool stopped = false;
  std::string stop_reason;

  explicit FlState(ParamVector initial, double delta = 1e-5)
      : global(std::move(initial)), ledger(delta) {}
};

// Extension points for one round. Only `train_client` is required. Hooks
// other than `train_client` run on the calling thread; `train_client` may run
// concurrently for different clients and must only read shared data.
struct RoundHooks {
  // Rewrites the honest selection (e.g. to force an attacker in).
  std::function<std::vector<size_t>(size_t round, const std::vector<size_t>& selected,
                                    RngStream& rng)>
      override_selection;
  // Clients that receive their own last local model instead of the global one.
  std::function<std::vector<size_t>(size_t round)> isolate;
  // Last chance to tamper with the model a client is about to receive.
  std::function<void(size_t round, size_t client_id, ParamVector& view)> adjust_view;
  // Produces the update of `client_id` given the model it received. LDP
  // clients charge `client_ledger`, which the engine merges afterwards.
  std::function<ClientUpdate(size_t round, size_t client_id, const ParamVector& view,
                             PrivacyLedger& client_ledger, RngStream& rng)>
      train_client;
  // Sees the round's per-client updates and views (global-attacker vantage).
  std::function<void(size_t round, const FlState& before,
                     std::span<const ClientUpdate> updates,
                     const std::map<size_t, ParamVector>& views,
                     const ParamVector& new_global)>
      observe;
  // Fills accuracy fields of the record for the new global model.
  std::function<void(const ParamVector& global, RoundRecord& record)> evaluate;
};

// epsilon reported for the state under `cfg`: RDP for CDP, sequential sum for
// weak DP, worst participant for LDP; nullopt when nothing is tracked.
std::optional<double> EpsilonSpent(const FlState& state, const ServerConfig& cfg);

// One round: budget check (CDP), select, optional override, views, parallel
// local training, aggregation, theta += server_lr * aggregate, evaluation.
// Returns nullopt without touching the model once the run is stopped.
std::optional<RoundRecord> RunRound(FlState& state, size_t n_clients,
                                    const ServerConfig& cfg, const RoundHooks& hooks,
                                    const RngStream& rng);

// Runs cfg.rounds rounds (fewer if the budget guard stops the run).
std::vector<RoundRecord> RunRounds(FlState& state, size_t n_clients,
                                   const ServerConfig& cfg, const RoundHooks& hooks,
                                   const RngStream& rng);

}  // namespace flg

#endif  // FLG_FL_ENGINE_H_
