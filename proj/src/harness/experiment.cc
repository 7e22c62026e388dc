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

#include "flg/harness/experiment.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "flg/adversary/backdoor.h"
#include "flg/adversary/mia.h"
#include "flg/adversary/propinf.h"
#include "flg/common/error.h"
#include "flg/data/csv.h"
#include "flg/data/synthetic.h"
#include "flg/privacy/rdp.h"

namespace flg {
namespace {

Dataset Generate(const DatasetConfig& d, double property_fraction, size_t per_class,
                 RngStream& rng) {
  if (d.kind == "blobs") {
    BlobsSpec s;
    s.num_classes = d.num_classes;
    s.dim = d.dim;
    s.per_class = per_class;
    s.property_fraction = property_fraction;
    s.separation = d.separation;
    s.property_shift = d.property_shift;
    s.property_dims = d.property_dims;
    s.noise = d.noise;
    return GenBlobs(s, rng);
  }
  if (d.kind == "grid_images") {
    GridSpec s;
    s.num_classes = d.num_classes;
    s.side = d.side;
    s.per_class = per_class;
    s.noise = d.noise;
    return GenGridImages(s, rng);
  }
  return LoadCsv(d.path);
}

// Random subset of `count` examples, in sampled order.
Dataset Sample(const Dataset& pool, size_t count, RngStream& rng) {
  if (count > pool.size()) {
    throw InvalidArgument("cannot sample " + std::to_string(count) + " of " +
                          std::to_string(pool.size()) + " examples");
  }
  std::vector<size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + static_cast<size_t>(rng.UniformInt(pool.size() - i));
    std::swap(idx[i], idx[j]);
  }
  Dataset out;
  out.num_classes = pool.num_classes;
  for (size_t i = 0; i < count; ++i) out.examples.push_back(pool.examples[idx[i]]);
  return out;
}

struct Environment {
  Dataset train;
  Dataset test;
  std::vector<Dataset> shards;
  ModelArch arch;
};

Environment BuildEnvironment(const ExperimentConfig& cfg, const RngStream& rep_rng) {
  Environment env;
  RngStream data_rng = rep_rng.Derive("data");
  const Dataset all =
      Generate(cfg.dataset, cfg.dataset.property_fraction, cfg.dataset.per_class, data_rng);
  RngStream split_rng = rep_rng.Derive("split");
  std::vector<size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0);
  split_rng.Shuffle(idx);
  const size_t n_test = std::clamp<size_t>(
      static_cast<size_t>(std::llround(cfg.dataset.test_fraction *
                                       static_cast<double>(all.size()))),
      1, all.size() - 1);
  env.train.num_classes = env.test.num_classes = all.num_classes;
  for (size_t i = 0; i < idx.size(); ++i) {
    (i < n_test ? env.test : env.train).examples.push_back(all.examples[idx[i]]);
  }
  RngStream part_rng = rep_rng.Derive("partition");
  env.shards = Partition(env.train, cfg.num_clients, cfg.partition, part_rng);
  std::vector<size_t> widths = {all.feature_width()};
  widths.insert(widths.end(), cfg.model.hidden.begin(), cfg.model.hidden.end());
  widths.push_back(all.num_classes);
  env.arch = ModelArch{widths};
  env.arch.Validate();
  return env;
}

ServerConfig MakeServerConfig(const ExperimentConfig& cfg) {
  ServerConfig s;
  switch (cfg.defense.kind) {
    case DefenseKind::kNone:
    case DefenseKind::kLdp:
      s.aggregator = AggregatorKind::kPlain;
      break;
    case DefenseKind::kNormBound:
      s.aggregator = AggregatorKind::kNormBound;
      break;
    case DefenseKind::kWeakDp:
      s.aggregator = AggregatorKind::kWeakDp;
      break;
    case DefenseKind::kCdp:
      s.aggregator = AggregatorKind::kCdp;
      break;
  }
  s.server_lr = cfg.defense.server_lr;
  s.norm_threshold = cfg.defense.norm_threshold;
  s.weak_dp_sigma = cfg.defense.weak_dp_sigma;
  s.cdp.clip_bound = cfg.defense.cdp.clip_bound;
  s.cdp.noise_scale = cfg.defense.cdp.noise_scale;
  s.cdp.selection_prob = cfg.selection.mode == SelectionSpec::Mode::kFixedK
                             ? static_cast<double>(cfg.selection.k) /
                                   static_cast<double>(cfg.num_clients)
                             : cfg.selection.q;
  s.cdp.budget_threshold = cfg.defense.cdp.budget_threshold;
  s.cdp.delta = cfg.defense.delta;
  s.cdp.sigma_mode = cfg.defense.cdp.sigma_mode;
  s.rounds = cfg.rounds;
  s.selection = cfg.selection;
  return s;
}

DpSgdConfig MakeDpConfig(const ExperimentConfig& cfg, double z) {
  const LdpSettings& l = cfg.defense.ldp;
  DpSgdConfig dp;
  dp.clip_bound = l.clip_bound;
  dp.noise_multiplier = z;
  dp.sampling_prob = l.sampling_prob;
  dp.epochs = l.epochs;
  dp.lr = l.lr;
  dp.noise_scales_with_S = l.noise_mode != "absolute";
  return dp;
}

std::string AccountantMode(const ExperimentConfig& cfg) {
  switch (cfg.defense.kind) {
    case DefenseKind::kCdp:
      return "rdp";
    case DefenseKind::kWeakDp:
      return "naive_sequential";
    case DefenseKind::kLdp:
      return cfg.defense.ldp.noise_mode == "absolute" ? "none" : "rdp_per_client_max";
    default:
      return "none";
  }
}

// Shared per-run state for every attack family.
class Run {
 public:
  Run(const ExperimentConfig& cfg, size_t rep)
      : cfg_(cfg),
        rep_rng_(RepetitionStream(cfg.master_seed, rep)),
        env_(BuildEnvironment(cfg, rep_rng_)),
        server_(MakeServerConfig(cfg)),
        state_(InitModelFor(), cfg.defense.delta) {
    result_.rep = rep;
    if (cfg.defense.kind == DefenseKind::kLdp) {
      const double z = ResolveLdpNoiseMultiplier(cfg);
      dp_ = MakeDpConfig(cfg, z);
      result_.ldp_noise_multiplier = z;
    }
    server_.Validate(cfg.num_clients);
  }

  RepetitionResult Execute() {
    RoundHooks hooks;
    hooks.evaluate = [this](const ParamVector& global, RoundRecord& rec) {
      rec.main_accuracy = Evaluate(global, env_.arch, env_.test).accuracy;
    };
    hooks.train_client = [this](size_t, size_t id, const ParamVector& view,
                                PrivacyLedger& ledger, RngStream& rng) {
      return HonestUpdate(id, view, env_.shards[id], ledger, rng);
    };
    switch (cfg_.attack.kind) {
      case AttackKind::kNone:
        Loop(hooks);
        break;
      case AttackKind::kBackdoor:
        RunBackdoor(hooks);
        break;
      case AttackKind::kMia:
        RunMia(hooks);
        break;
      case AttackKind::kPropinf:
        RunPropinf(hooks);
        break;
    }
    result_.eps = EpsilonSpent(state_, server_);
    return std::move(result_);
  }

 private:
  ParamVector InitModelFor() {
    RngStream init = rep_rng_.Derive("init");
    return InitModel(env_.arch, init);
  }

  bool LdpApplies(size_t id) const {
    if (cfg_.defense.kind != DefenseKind::kLdp) return false;
    return !(cfg_.defense.ldp.attackers_opt_out && attackers_.count(id));
  }

  ClientUpdate HonestUpdate(size_t id, const ParamVector& view, const Dataset& data,
                            PrivacyLedger& ledger, RngStream& rng) const {
    if (LdpApplies(id)) return ClientUpdateLdp(view, env_.arch, data, dp_, &ledger, id, rng);
    if (cfg_.defense.kind == DefenseKind::kCdp) {
      return ClientUpdateClipped(view, env_.arch, data, cfg_.client,
                                 cfg_.defense.cdp.clip_bound, id, rng);
    }
    return ClientUpdateHonest(view, env_.arch, data, cfg_.client, id, rng);
  }

  // Runs rounds until done, stopped or diverged; records survive divergence.
  void Loop(const RoundHooks& hooks) {
    const RngStream fl_rng = rep_rng_.Derive("fl");
    try {
      while (state_.round < cfg_.rounds) {
        std::optional<RoundRecord> rec =
            RunRound(state_, cfg_.num_clients, server_, hooks, fl_rng);
        if (!rec) break;
        result_.records.push_back(std::move(*rec));
      }
    } catch (const DivergenceError& e) {
      result_.diverged = true;
      result_.error = e.what();
      result_.stop_reason = "diverged";
    }
    if (state_.stopped) result_.stop_reason = state_.stop_reason;
  }

  void RunBackdoor(RoundHooks& hooks) {
    const BackdoorConfig& b = cfg_.attack.backdoor;
    const size_t width = env_.train.feature_width();
    BackdoorTask task;
    task.kind = ParseBackdoorKind(b.kind);
    task.target_label = b.target_label;
    task.boost_mode = ParseBoostMode(b.boost_mode);
    task.trigger.pixel_index = b.pixel_index.value_or(width - 1);
    task.trigger.trigger_value = b.trigger_value;
    task.trigger.target_label = b.target_label;
    task.trigger.poison_fraction = b.poison_fraction;
    const size_t feature = b.semantic_feature;
    const double threshold = b.semantic_threshold;
    task.predicate = [feature, threshold](const Example& ex) {
      return feature < ex.features.size() && ex.features[feature] > threshold;
    };
    try {
      task.Validate(width, env_.train.num_classes);
    } catch (const InvalidArgument& e) {
      throw ConfigError("attack.backdoor", e.what());
    }

    Dataset triggered;
    if (task.kind == BackdoorKind::kSinglePixel) {
      triggered = TriggeredTestSet(env_.test, task.trigger);
    } else {
      triggered.num_classes = env_.test.num_classes;
      for (const Example& ex : env_.test.examples) {
        if (task.predicate(ex) && ex.label != task.target_label) triggered.examples.push_back(ex);
      }
    }
    if (triggered.empty()) {
      throw ConfigError("attack.backdoor", "no held-out examples carry the backdoor");
    }

    std::vector<size_t> ids(cfg_.num_clients);
    std::iota(ids.begin(), ids.end(), 0);
    RngStream pick = rep_rng_.Derive("attackers");
    pick.Shuffle(ids);
    const size_t a = cfg_.attackers.Resolve(cfg_.num_clients);
    attackers_.insert(ids.begin(), ids.begin() + static_cast<long>(a));
    for (size_t id : attackers_) {
      RngStream prng = rep_rng_.Derive("poison", id);
      poisoned_.emplace(id, PoisonShard(env_.shards[id], task, prng));
    }

    hooks.override_selection = [this](size_t, const std::vector<size_t>& selected,
                                      RngStream& rng) {
      std::vector<size_t> out = selected;
      if (cfg_.attackers.force_each_round && cfg_.selection.mode == SelectionSpec::Mode::kFixedK) {
        std::vector<size_t> honest;
        for (size_t id : selected) {
          if (!attackers_.count(id)) honest.push_back(id);
        }
        rng.Shuffle(honest);
        honest.resize(std::min(honest.size(), cfg_.selection.k - attackers_.size()));
        out = honest;
        out.insert(out.end(), attackers_.begin(), attackers_.end());
        std::sort(out.begin(), out.end());
      }
      n_total_ = 0.0;
      n_attacker_ = 0.0;
      for (size_t id : out) {
        const double n = static_cast<double>(env_.shards[id].size());
        n_total_ += n;
        if (attackers_.count(id)) n_attacker_ += n;
      }
      return out;
    };
    hooks.train_client = [this, task](size_t, size_t id, const ParamVector& view,
                                      PrivacyLedger& ledger, RngStream& rng) {
      if (!attackers_.count(id)) return HonestUpdate(id, view, env_.shards[id], ledger, rng);
      const Dataset& shard = poisoned_.at(id);
      ClientUpdate u;
      if (LdpApplies(id)) {
        u = ClientUpdateLdp(view, env_.arch, shard, dp_, &ledger, id, rng);
      } else {
        const ParamVector theta_star =
            TrainBackdooredModel(view, env_.arch, shard, cfg_.attack.backdoor.training, rng);
        if (task.boost_mode == BoostMode::kReplacement) {
          u = BackdoorReplacementUpdate(theta_star, view, n_total_, n_attacker_,
                                        cfg_.defense.server_lr, id);
        } else {
          u.delta = theta_star - view;
        }
      }
      u.n_examples = shard.size();
      u.client_id = id;
      u.behavior = BehaviorTag::kAttacker;
      return u;
    };
    hooks.evaluate = [this, triggered, target = task.target_label](const ParamVector& global,
                                                                   RoundRecord& rec) {
      rec.main_accuracy = Evaluate(global, env_.arch, env_.test).accuracy;
      rec.backdoor_accuracy = BackdoorAccuracy(global, env_.arch, triggered, target);
    };
    Loop(hooks);
  }

  void RunMia(RoundHooks& hooks) {
    const MiaSettings& m = cfg_.attack.mia;
    Dataset pool;
    pool.num_classes = env_.train.num_classes;
    for (size_t id = 0; id < env_.shards.size(); ++id) {
      const bool include = m.mia.role == MiaRole::kLocal ? id != m.mia.attacker_client
                                                         : id == m.mia.target_client;
      if (include) {
        pool.examples.insert(pool.examples.end(), env_.shards[id].examples.begin(),
                             env_.shards[id].examples.end());
      }
    }
    if (pool.size() < m.num_points || env_.test.size() < m.num_points) {
      throw ConfigError("attack.mia.num_points",
                        "only " + std::to_string(pool.size()) + " candidate members and " +
                            std::to_string(env_.test.size()) + " held-out points");
    }
    RngStream points = rep_rng_.Derive("mia-points");
    const Dataset members = Sample(pool, m.num_points, points);
    const Dataset nonmembers = Sample(env_.test, m.num_points, points);
    Dataset targets = members;
    targets.examples.insert(targets.examples.end(), nonmembers.examples.begin(),
                            nonmembers.examples.end());
    if (m.mia.role == MiaRole::kLocal) attackers_.insert(m.mia.attacker_client);

    MiaAdversary adversary(m.mia, env_.arch, targets, cfg_.rounds, cfg_.defense.server_lr);
    hooks.train_client = [this, &adversary](size_t r, size_t id, const ParamVector& view,
                                            PrivacyLedger& ledger, RngStream& rng) {
      ClientUpdate u = HonestUpdate(id, view, env_.shards[id], ledger, rng);
      if (adversary.config().role == MiaRole::kLocal &&
          id == adversary.config().attacker_client) {
        adversary.TamperUpdate(r, view, u);
      }
      return u;
    };
    hooks.adjust_view = [&adversary](size_t r, size_t id, ParamVector& view) {
      adversary.TamperView(r, id, view);
    };
    hooks.isolate = [&adversary](size_t r) { return adversary.Isolated(r); };
    hooks.observe = [&adversary](size_t r, const FlState& before,
                                 std::span<const ClientUpdate> updates,
                                 const std::map<size_t, ParamVector>& views,
                                 const ParamVector& next) {
      adversary.Observe(r, before, updates, views, next);
    };
    Loop(hooks);
    if (result_.diverged || result_.records.empty()) return;
    RngStream attack_rng = rep_rng_.Derive("mia");
    result_.attack = MiaRun(adversary.Trace(members, nonmembers), m.mia, attack_rng);
    result_.records.back().attack_metric = result_.attack->auc;
  }

  void RunPropinf(RoundHooks& hooks) {
    const PropinfSettings& p = cfg_.attack.propinf;
    const size_t classes = cfg_.dataset.num_classes;
    const size_t per_class = (p.aux_size + classes - 1) / classes;
    RngStream target_rng = rep_rng_.Derive("propinf-target-pool");
    RngStream with_rng = rep_rng_.Derive("propinf-aux-with");
    RngStream without_rng = rep_rng_.Derive("propinf-aux-without");
    // One pool for both arms, so positive and negative batches are equally
    // fresh; with property_fraction 0 the arms are identically distributed.
    const Dataset target_pool =
        Generate(cfg_.dataset, p.property_fraction > 0.0 ? 0.5 : 0.0, 2 * per_class, target_rng);
    Dataset pool_with;
    Dataset pool_without;
    pool_with.num_classes = pool_without.num_classes = target_pool.num_classes;
    for (const Example& ex : target_pool.examples) {
      (ex.has_property ? pool_with : pool_without).examples.push_back(ex);
    }
    const size_t batch = std::min(cfg_.client.batch_size, pool_without.size());
    const size_t n_with = std::min(
        pool_with.size(),
        static_cast<size_t>(std::llround(p.property_fraction * static_cast<double>(batch))));
    const Dataset aux_with = Generate(cfg_.dataset, p.property_fraction, per_class, with_rng);
    const Dataset aux_without = Generate(cfg_.dataset, 0.0, per_class, without_rng);
    attackers_.insert(p.attacker_client);

    std::vector<int> truth(cfg_.rounds);
    for (size_t r = 0; r < cfg_.rounds; ++r) {
      RngStream t = rep_rng_.Derive("propinf-truth", r);
      truth[r] = t.Bernoulli(p.target_property_prob) ? 1 : 0;
    }
    std::vector<PropinfObservation> stream;

    hooks.train_client = [&, this](size_t r, size_t id, const ParamVector& view,
                                   PrivacyLedger& ledger, RngStream& rng) {
      if (id != p.target_client) {
        const Dataset& shard = env_.shards[id];
        return HonestUpdate(id, view, Sample(shard, std::min(cfg_.client.batch_size, shard.size()), rng),
                            ledger, rng);
      }
      const size_t k = truth[r] == 1 ? n_with : 0;
      Dataset mixed = Sample(pool_with, k, rng);
      const Dataset rest = Sample(pool_without, batch - k, rng);
      mixed.examples.insert(mixed.examples.end(), rest.examples.begin(), rest.examples.end());
      return HonestUpdate(id, view, mixed, ledger, rng);
    };
    hooks.observe = [&, this](size_t r, const FlState& before,
                              std::span<const ClientUpdate> updates,
                              const std::map<size_t, ParamVector>&, const ParamVector& next) {
      const ClientUpdate* own = nullptr;
      bool target_present = false;
      double n_total = 0.0;
      for (const ClientUpdate& u : updates) {
        n_total += static_cast<double>(u.n_examples);
        if (u.client_id == p.attacker_client) own = &u;
        if (u.client_id == p.target_client) target_present = true;
      }
      if (!own || !target_present) return;
      stream.push_back({before.global,
                        ObservedOthers(before.global, next, cfg_.defense.server_lr, n_total, *own),
                        truth[r], updates.size() - 1});
    };
    Loop(hooks);
    if (result_.diverged || stream.empty()) return;
    RngStream attack_rng = rep_rng_.Derive("propinf");
    // The attacker replays the participants' local procedure, defenses included.
    const LocalSimulator simulate = [&, this](const ParamVector& model, const Dataset& batch,
                                              RngStream& rng) {
      PrivacyLedger scratch(cfg_.defense.delta);
      ParamVector g = HonestUpdate(p.target_client, model, batch, scratch, rng).delta;
      g *= -1.0;
      return g;
    };
    const PropinfSet set = PropinfCollect(stream, env_.arch, aux_with, aux_without, p.propinf,
                                          attack_rng, simulate);
    result_.attack = PropinfRun(set, p.propinf, attack_rng);
    result_.records.back().attack_metric = result_.attack->auc;
  }

  const ExperimentConfig& cfg_;
  RngStream rep_rng_;
  Environment env_;
  ServerConfig server_;
  FlState state_;
  DpSgdConfig dp_;
  RepetitionResult result_;
  std::set<size_t> attackers_;
  std::map<size_t, Dataset> poisoned_;
  double n_total_ = 0.0;
  double n_attacker_ = 0.0;
};

}  // namespace

size_t ExperimentArtifacts::rounds_executed() const {
  size_t n = 0;
  for (const RepetitionResult& r : reps) n = std::max(n, r.records.size());
  return n;
}

bool ExperimentArtifacts::all_diverged() const {
  return !reps.empty() &&
         std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.diverged; });
}

RngStream RepetitionStream(uint64_t master_seed, size_t rep) {
  return RngStream(master_seed).Derive("repetition", rep);
}

double ResolveLdpNoiseMultiplier(const ExperimentConfig& cfg) {
  const LdpSettings& l = cfg.defense.ldp;
  if (l.noise_mode == "absolute") return l.sigma;
  if (l.noise_mode == "multiplier") return l.noise_multiplier;
  const uint64_t steps_per_epoch = static_cast<uint64_t>(std::ceil(1.0 / l.sampling_prob));
  const uint64_t steps = static_cast<uint64_t>(cfg.rounds) * l.epochs * steps_per_epoch;
  return CalibrateNoiseMultiplier(l.target_epsilon, l.sampling_prob, steps, cfg.defense.delta);
}

RepetitionResult RunRepetition(const ExperimentConfig& cfg, size_t rep) {
  Run run(cfg, rep);
  return run.Execute();
}

ExperimentArtifacts RunExperiment(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  ExperimentArtifacts out;
  out.config = cfg;
  out.accountant_mode = AccountantMode(cfg);
  for (size_t rep = 0; rep < cfg.repetitions; ++rep) out.reps.push_back(RunRepetition(cfg, rep));
  return out;
}

}  // namespace flg
