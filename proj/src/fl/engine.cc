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

#include "flg/fl/engine.h"

#include <algorithm>
#include <numeric>

#include "flg/common/error.h"
#include "flg/common/parallel.h"

namespace flg {

std::vector<size_t> SelectClients(size_t n_clients, const SelectionSpec& selection,
                                  RngStream& rng) {
  std::vector<size_t> out;
  if (selection.mode == SelectionSpec::Mode::kFixedK) {
    if (selection.k > n_clients) {
      throw InvalidArgument("cannot select " + std::to_string(selection.k) + " of " +
                            std::to_string(n_clients) + " clients");
    }
    std::vector<size_t> ids(n_clients);
    std::iota(ids.begin(), ids.end(), 0);
    // Partial Fisher-Yates: the first k slots are a uniform sample.
    for (size_t i = 0; i < selection.k; ++i) {
      const size_t j = i + static_cast<size_t>(rng.UniformInt(n_clients - i));
      std::swap(ids[i], ids[j]);
    }
    out.assign(ids.begin(), ids.begin() + static_cast<long>(selection.k));
    std::sort(out.begin(), out.end());
  } else {
    if (!(selection.q > 0.0 && selection.q <= 1.0)) {
      throw InvalidArgument("selection probability must be in (0, 1]");
    }
    for (size_t i = 0; i < n_clients; ++i) {
      if (selection.q >= 1.0 || rng.Bernoulli(selection.q)) out.push_back(i);
    }
  }
  return out;
}

void ServerConfig::Validate(size_t n_clients) const {
  if (!(server_lr > 0.0)) throw InvalidArgument("server learning rate must be positive");
  if (rounds == 0) throw InvalidArgument("rounds must be positive");
  if (selection.mode == SelectionSpec::Mode::kFixedK &&
      (selection.k == 0 || selection.k > n_clients)) {
    throw InvalidArgument("selection K must be in [1, N]");
  }
  if (selection.mode == SelectionSpec::Mode::kProbability &&
      !(selection.q > 0.0 && selection.q <= 1.0)) {
    throw InvalidArgument("selection q must be in (0, 1]");
  }
  if ((aggregator == AggregatorKind::kNormBound ||
       aggregator == AggregatorKind::kWeakDp) &&
      !(norm_threshold > 0.0)) {
    throw InvalidArgument("norm threshold must be positive");
  }
  if (aggregator == AggregatorKind::kWeakDp && !(weak_dp_sigma >= 0.0)) {
    throw InvalidArgument("weak DP sigma must be >= 0");
  }
  if (aggregator == AggregatorKind::kCdp) cdp.Validate();
}

std::optional<double> EpsilonSpent(const FlState& state, const ServerConfig& cfg) {
  switch (cfg.aggregator) {
    case AggregatorKind::kCdp:
      return state.ledger.RdpEpsilon();
    case AggregatorKind::kWeakDp:
      return state.ledger.NaiveEpsilon();
    default:
      break;
  }
  if (state.client_ledgers.empty()) return std::nullopt;
  double worst = 0.0;
  for (const auto& [id, ledger] : state.client_ledgers) {
    worst = std::max(worst, ledger.RdpEpsilon());
  }
  return worst;
}

std::optional<RoundRecord> RunRound(FlState& state, size_t n_clients,
                                    const ServerConfig& cfg, const RoundHooks& hooks,
                                    const RngStream& rng) {
  if (state.stopped) return std::nullopt;
  if (!hooks.train_client) throw InvalidArgument("RunRound: train_client hook missing");
  if (cfg.aggregator == AggregatorKind::kCdp &&
      BudgetGuard(state.ledger, cfg.cdp.budget_threshold, cfg.cdp.delta) ==
          GuardDecision::kStop) {
    state.stopped = true;
    state.stop_reason = "privacy budget exhausted";
    return std::nullopt;
  }

  const size_t r = state.round;
  RngStream round_rng = rng.Derive("round", r);
  RoundRecord rec;
  rec.round = r;
  RngStream select_rng = round_rng.Derive("select");
  rec.selected = SelectClients(n_clients, cfg.selection, select_rng);
  rec.participants = rec.selected;
  if (hooks.override_selection) {
    RngStream override_rng = round_rng.Derive("override");
    rec.participants = hooks.override_selection(r, rec.selected, override_rng);
    std::sort(rec.participants.begin(), rec.participants.end());
    rec.participants.erase(std::unique(rec.participants.begin(), rec.participants.end()),
                           rec.participants.end());
  }
  if (hooks.isolate) rec.isolated = hooks.isolate(r);

  std::map<size_t, ParamVector> views;
  for (size_t id : rec.participants) {
    if (id >= n_clients) throw InvalidArgument("participant id out of range");
    const bool isolated =
        std::find(rec.isolated.begin(), rec.isolated.end(), id) != rec.isolated.end();
    auto last = state.last_local.find(id);
    views.emplace(id, isolated && last != state.last_local.end() ? last->second
                                                                 : state.global);
  }
  if (hooks.adjust_view) {
    for (auto& [id, view] : views) hooks.adjust_view(r, id, view);
  }

  std::vector<ClientUpdate> updates(rec.participants.size());
  std::vector<PrivacyLedger> round_ledgers(rec.participants.size(),
                                           PrivacyLedger(state.ledger.delta()));
  ParallelFor(rec.participants.size(), [&](size_t i) {
    const size_t id = rec.participants[i];
    RngStream client_rng = rng.Derive("client", r, id);
    updates[i] = hooks.train_client(r, id, views.at(id), round_ledgers[i], client_rng);
    updates[i].client_id = id;
  });
  for (size_t i = 0; i < rec.participants.size(); ++i) {
    const PrivacyLedger& l = round_ledgers[i];
    if (l.rdp().empty() && l.naive_entries().empty()) continue;
    auto [it, inserted] =
        state.client_ledgers.try_emplace(rec.participants[i], state.ledger.delta());
    it->second.AccumulateRdp(l.rdp());
    for (double e : l.naive_entries()) it->second.AccumulateNaive(e);
  }

  ParamVector next = state.global;
  if (!updates.empty()) {
    RngStream noise_rng = round_rng.Derive("server-noise");
    ParamVector agg;
    switch (cfg.aggregator) {
      case AggregatorKind::kPlain:
        agg = AggregatePlain(updates, &rec.diagnostics);
        break;
      case AggregatorKind::kNormBound:
        agg = AggregateNormBound(updates, cfg.norm_threshold, &rec.diagnostics);
        break;
      case AggregatorKind::kWeakDp:
        agg = AggregateWeakDp(updates, cfg.norm_threshold, cfg.weak_dp_sigma,
                              state.ledger, noise_rng, &rec.diagnostics);
        break;
      case AggregatorKind::kCdp:
        agg = AggregateCdp(updates, cfg.cdp, state.ledger, noise_rng, &rec.diagnostics);
        break;
    }
    next.AddScaled(agg, cfg.server_lr);
    if (!next.AllFinite()) throw DivergenceError("global model became non-finite");
  }

  if (hooks.observe) hooks.observe(r, state, updates, views, next);
  for (const ClientUpdate& u : updates) {
    state.last_local.insert_or_assign(u.client_id, views.at(u.client_id) + u.delta);
  }
  state.global = std::move(next);
  state.round = r + 1;
  if (hooks.evaluate) hooks.evaluate(state.global, rec);
  rec.eps_spent = EpsilonSpent(state, cfg);
  return rec;
}

std::vector<RoundRecord> RunRounds(FlState& state, size_t n_clients,
                                   const ServerConfig& cfg, const RoundHooks& hooks,
                                   const RngStream& rng) {
  cfg.Validate(n_clients);
  std::vector<RoundRecord> records;
  while (state.round < cfg.rounds) {
    std::optional<RoundRecord> rec = RunRound(state, n_clients, cfg, hooks, rng);
    if (!rec) break;
    records.push_back(std::move(*rec));
  }
  return records;
}

}  // namespace flg
