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

#include "flg/adversary/mia.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <charconv>
#include <string>

#include "flg/common/error.h"
#include "flg/common/parallel.h"

namespace flg {
namespace {

std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

MiaRole ParseMiaRole(std::string_view name) {
  if (name == "local") return MiaRole::kLocal;
  if (name == "global") return MiaRole::kGlobal;
  throw InvalidArgument("unknown MIA attacker role '" + std::string(name) + "'");
}

std::string_view MiaRoleName(MiaRole role) {
  return role == MiaRole::kLocal ? "local" : "global";
}

MiaMode ParseMiaMode(std::string_view name) {
  if (name == "passive") return MiaMode::kPassive;
  if (name == "active_gradient_ascent") return MiaMode::kActiveGradientAscent;
  if (name == "isolating") return MiaMode::kIsolating;
  if (name == "isolating_gradient_ascent") return MiaMode::kIsolatingGradientAscent;
  throw InvalidArgument("unknown MIA mode '" + std::string(name) + "'");
}

std::string_view MiaModeName(MiaMode mode) {
  switch (mode) {
    case MiaMode::kPassive:
      return "passive";
    case MiaMode::kActiveGradientAscent:
      return "active_gradient_ascent";
    case MiaMode::kIsolating:
      return "isolating";
    case MiaMode::kIsolatingGradientAscent:
      return "isolating_gradient_ascent";
  }
  return "passive";
}

void MiaConfig::Validate() const {
  if (uses_isolation() && role != MiaRole::kGlobal) {
    throw InvalidArgument("isolating MIA modes require the global attacker role");
  }
  if (!(ascent_lr >= 0.0) || !std::isfinite(ascent_lr)) {
    throw InvalidArgument("MIA ascent_lr must be finite and >= 0");
  }
  if (!(active_fraction >= 0.0 && active_fraction <= 1.0)) {
    throw InvalidArgument("MIA active_fraction must be in [0, 1]");
  }
  if (num_snapshots == 0) throw InvalidArgument("MIA needs at least one snapshot");
  if (!features.loss && !features.confidence && !features.grad_norm &&
      !features.full_gradient) {
    throw InvalidArgument("MIA feature set is empty");
  }
}

bool MiaActiveRound(size_t round, size_t total_rounds, double active_fraction) {
  const double start =
      std::ceil((1.0 - active_fraction) * static_cast<double>(total_rounds));
  return static_cast<double>(round) >= start && round < total_rounds;
}

std::vector<double> MiaFeatures(std::span<const ParamVector> snapshots,
                                const ModelArch& arch, const Example& point,
                                const MiaFeatureSet& set) {
  if (snapshots.empty()) throw InvalidArgument("MiaFeatures: no snapshots");
  std::vector<double> out;
  for (const ParamVector& model : snapshots) {
    if (set.loss || set.grad_norm || set.full_gradient) {
      const LossAndGradient lg = ExampleLossAndGrad(model, arch, point);
      if (set.loss) out.push_back(lg.loss);
      if (set.confidence) {
        const std::vector<double> p = Predict(model, arch, point.features);
        out.push_back(*std::max_element(p.begin(), p.end()));
      }
      if (set.grad_norm) out.push_back(lg.grad.L2Norm());
      if (set.full_gradient) {
        out.insert(out.end(), lg.grad.values().begin(), lg.grad.values().end());
      }
    } else if (set.confidence) {
      const std::vector<double> p = Predict(model, arch, point.features);
      out.push_back(*std::max_element(p.begin(), p.end()));
    }
  }
  return out;
}

AttackReport MiaAttackOnFeatures(const FeatureMatrix& member_features,
                                 const FeatureMatrix& nonmember_features,
                                 RngStream& rng) {
  if (member_features.size() != nonmember_features.size()) {
    throw InvalidArgument("MIA: member and non-member sets must have equal size");
  }
  if (member_features.size() < 2) {
    throw InvalidArgument("MIA: need at least two members and two non-members");
  }
  std::vector<size_t> mi(member_features.size());
  std::vector<size_t> ni(nonmember_features.size());
  std::iota(mi.begin(), mi.end(), 0);
  std::iota(ni.begin(), ni.end(), 0);
  RngStream split = rng.Derive("mia-split");
  split.Shuffle(mi);
  split.Shuffle(ni);

  FeatureMatrix train_x, test_x;
  std::vector<int> train_y, test_y;
  const size_t half = member_features.size() / 2;
  for (size_t i = 0; i < mi.size(); ++i) {
    (i < half ? train_x : test_x).push_back(member_features[mi[i]]);
    (i < half ? train_y : test_y).push_back(1);
    (i < half ? train_x : test_x).push_back(nonmember_features[ni[i]]);
    (i < half ? train_y : test_y).push_back(0);
  }
  LogisticAttackModel clf;
  clf.Fit(train_x, train_y);
  const std::vector<double> scores = clf.Scores(test_x);

  AttackReport report;
  report.attack = "membership_inference";
  report.confusion = Confusion(scores, test_y);
  report.accuracy = report.confusion.accuracy();
  report.auc = Auc(scores, test_y);
  return report;
}

AttackReport MiaRun(const MiaTrace& trace, const MiaConfig& cfg, RngStream& rng) {
  cfg.Validate();
  if (trace.snapshots.empty()) throw InvalidArgument("MIA: trace has no snapshots");
  if (trace.members.size() != trace.nonmembers.size() || trace.members.empty()) {
    throw InvalidArgument("MIA: member and non-member sets must be non-empty and equal size");
  }
  for (const Example& m : trace.members.examples) {
    for (const Example& n : trace.nonmembers.examples) {
      if (m.features == n.features) {
        throw InvalidArgument("MIA: member and non-member sets overlap");
      }
    }
  }
  const size_t keep = std::min(cfg.num_snapshots, trace.snapshots.size());
  const std::span<const ParamVector> snaps(trace.snapshots.end() - static_cast<long>(keep),
                                           trace.snapshots.end());

  const size_t n = trace.members.size();
  FeatureMatrix member_x(n), nonmember_x(n);
  ParallelFor(2 * n, [&](size_t i) {
    if (i < n) {
      member_x[i] = MiaFeatures(snaps, trace.arch, trace.members.examples[i], cfg.features);
    } else {
      nonmember_x[i - n] =
          MiaFeatures(snaps, trace.arch, trace.nonmembers.examples[i - n], cfg.features);
    }
  });
  AttackReport report = MiaAttackOnFeatures(member_x, nonmember_x, rng);

  // Per snapshot: AUC of a plain loss-threshold attack.
  if (cfg.features.loss) {
    const size_t stride = member_x.front().size() / keep;
    std::vector<int> labels(2 * n);
    std::fill(labels.begin(), labels.begin() + static_cast<long>(n), 1);
    for (size_t s = 0; s < keep; ++s) {
      std::vector<double> scores;
      for (const auto& row : member_x) scores.push_back(-row[s * stride]);
      for (const auto& row : nonmember_x) scores.push_back(-row[s * stride]);
      report.per_round.push_back(Auc(scores, labels));
    }
  }
  report.rounds = trace.rounds;
  report.config = {
      {"role", std::string(MiaRoleName(cfg.role))},
      {"mode", std::string(MiaModeName(cfg.mode))},
      {"ascent_lr", Num(cfg.ascent_lr)},
      {"active_fraction", Num(cfg.active_fraction)},
      {"num_snapshots", std::to_string(keep)},
      {"members", std::to_string(n)},
      {"split", "50/50 disjoint"},
      {"isolation_variant", "own_update_echo"},
      {"isolated_rounds", std::to_string(trace.isolated_rounds)},
      {"isolation_violations", std::to_string(trace.isolation_violations)},
  };
  return report;
}

ParamVector AscentGradient(const ParamVector& model, const ModelArch& arch,
                           const Dataset& targets) {
  if (targets.empty()) throw InvalidArgument("gradient ascent needs target points");
  return LossAndGrad(model, arch, targets.examples).grad;
}

MiaAdversary::MiaAdversary(MiaConfig cfg, ModelArch arch, Dataset ascent_targets,
                           size_t total_rounds, double server_lr)
    : cfg_(std::move(cfg)),
      arch_(std::move(arch)),
      targets_(std::move(ascent_targets)),
      total_rounds_(total_rounds),
      server_lr_(server_lr) {
  cfg_.Validate();
  if (cfg_.uses_ascent() && targets_.empty()) {
    throw InvalidArgument("gradient-ascent MIA needs target points");
  }
}

void MiaAdversary::TamperUpdate(size_t round, const ParamVector& view,
                                ClientUpdate& update) const {
  if (cfg_.role != MiaRole::kLocal || !cfg_.uses_ascent() || cfg_.ascent_lr == 0.0 ||
      !Active(round)) {
    return;
  }
  update.delta.AddScaled(AscentGradient(view, arch_, targets_), cfg_.ascent_lr);
}

void MiaAdversary::TamperView(size_t round, size_t client_id, ParamVector& view) const {
  if (cfg_.role != MiaRole::kGlobal || client_id != cfg_.target_client ||
      !cfg_.uses_ascent() || cfg_.ascent_lr == 0.0 || !Active(round)) {
    return;
  }
  view.AddScaled(AscentGradient(view, arch_, targets_), cfg_.ascent_lr);
}

std::vector<size_t> MiaAdversary::Isolated(size_t round) const {
  if (!cfg_.uses_isolation() || !Active(round)) return {};
  return {cfg_.target_client};
}

void MiaAdversary::Observe(size_t round, const FlState& before,
                           std::span<const ClientUpdate> updates,
                           const std::map<size_t, ParamVector>& views,
                           const ParamVector& new_global) {
  ++rounds_seen_;
  if (cfg_.role == MiaRole::kLocal) {
    ParamVector others = new_global;
    size_t n_total = 0;
    for (const ClientUpdate& u : updates) n_total += u.n_examples;
    for (const ClientUpdate& u : updates) {
      if (u.client_id != cfg_.attacker_client || n_total == 0) continue;
      others.AddScaled(u.delta, -server_lr_ * static_cast<double>(u.n_examples) /
                                    static_cast<double>(n_total));
    }
    snapshots_.push_back(std::move(others));
    return;
  }
  const size_t target = cfg_.target_client;
  auto view = views.find(target);
  if (view == views.end()) return;
  const std::vector<size_t> isolated = Isolated(round);
  if (!isolated.empty()) {
    ++isolated_rounds_;
    auto echo = before.last_local.find(target);
    if (echo == before.last_local.end()) {
      ++isolation_violations_;
    } else {
      ParamVector expected = echo->second;
      TamperView(round, target, expected);
      if (!(expected == view->second)) ++isolation_violations_;
    }
  }
  for (const ClientUpdate& u : updates) {
    if (u.client_id == target) snapshots_.push_back(view->second + u.delta);
  }
}

MiaTrace MiaAdversary::Trace(Dataset members, Dataset nonmembers) const {
  MiaTrace t;
  t.arch = arch_;
  t.snapshots = snapshots_;
  t.members = std::move(members);
  t.nonmembers = std::move(nonmembers);
  t.rounds = rounds_seen_;
  t.isolated_rounds = isolated_rounds_;
  t.isolation_violations = isolation_violations_;
  return t;
}

}  // namespace flg
