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

#include <gtest/gtest.h>

#include <cmath>

#include "flg/adversary/attack_model.h"
#include "flg/adversary/backdoor.h"
#include "flg/adversary/mia.h"
#include "flg/adversary/propinf.h"
#include "flg/common/error.h"
#include "flg/data/partition.h"
#include "flg/data/synthetic.h"
#include "flg/fl/aggregate.h"
#include "flg/fl/engine.h"

namespace flg {
namespace {

ParamVector RandomVector(size_t n, RngStream& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Normal(0.0, scale);
  return ParamVector::Flat(std::move(v));
}

// With honest clients at convergence the boosted update replaces the global
// model by the attacker's model.
TEST(Backdoor, ReplacementIsExact) {
  RngStream rng(100);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RngStream t = rng.Derive("trial", trial);
    const double eta = std::vector<double>{0.5, 1.0, 2.0}[trial % 3];
    const ParamVector global = RandomVector(50, t);
    const ParamVector theta_star = RandomVector(50, t);
    const size_t k = 2 + t.UniformInt(8);
    std::vector<ClientUpdate> ups;
    size_t n_total = 0;
    for (size_t c = 1; c < k; ++c) {
      ClientUpdate u;
      u.client_id = c;
      u.n_examples = 1 + t.UniformInt(100);
      u.delta = global.ZerosLike();
      n_total += u.n_examples;
      ups.push_back(std::move(u));
    }
    const size_t n_attacker = 1 + t.UniformInt(100);
    n_total += n_attacker;
    ups.push_back(BackdoorReplacementUpdate(theta_star, global, static_cast<double>(n_total),
                                            static_cast<double>(n_attacker), eta, 0));
    ParamVector next = global;
    next.AddScaled(AggregatePlain(ups), eta);
    worst = std::max(worst, MaxAbsDiff(next, theta_star));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Backdoor, ReplacementResidualIsHonestContribution) {
  RngStream rng(5);
  const ParamVector global = RandomVector(10, rng);
  const ParamVector theta_star = RandomVector(10, rng);
  ClientUpdate honest;
  honest.client_id = 1;
  honest.n_examples = 30;
  honest.delta = RandomVector(10, rng, 0.1);
  const std::vector<ClientUpdate> ups = {honest,
                                         BackdoorReplacementUpdate(theta_star, global, 40, 10, 2.0)};
  ParamVector next = global;
  next.AddScaled(AggregatePlain(ups), 2.0);
  EXPECT_LE(MaxAbsDiff(next - theta_star, 2.0 * 0.75 * honest.delta), 1e-12);
}

TEST(Backdoor, ReplacementValidatesArguments) {
  const ParamVector v = ParamVector::Flat({1.0});
  EXPECT_THROW(BackdoorReplacementUpdate(v, v, 10, 0, 1.0), InvalidArgument);
  EXPECT_THROW(BackdoorReplacementUpdate(v, v, 10, 1, 0.0), InvalidArgument);
  EXPECT_THROW(BackdoorReplacementUpdate(v, v, 1, 2, 1.0), InvalidArgument);
  EXPECT_EQ(BackdoorReplacementUpdate(v, v, 10, 2, 1.0).behavior, BehaviorTag::kAttacker);
}

TEST(Backdoor, AccuracyCountsTargetPredictions) {
  const ModelArch arch{{2, 2}};
  ParamVector model(arch.Shapes());
  model[arch.Shapes()[0].bias_offset() + 1] = 10.0;
  Dataset d;
  d.num_classes = 2;
  for (int i = 0; i < 5; ++i) d.examples.push_back({{0.1 * i, -0.2}, 0});
  EXPECT_EQ(BackdoorAccuracy(model, arch, d, 1), 1.0);
  EXPECT_EQ(BackdoorAccuracy(model, arch, d, 0), 0.0);
  EXPECT_THROW(BackdoorAccuracy(model, arch, Dataset{}, 0), InvalidArgument);
}

TEST(Backdoor, PoisonedTrainingLearnsTheTrigger) {
  RngStream rng(21);
  const Dataset clean = GenBlobs(3, 6, 80, 0.0, 4.0, rng);
  BackdoorTask task;
  task.trigger = {0, 6.0, 2, 0.5};
  task.target_label = 2;
  task.Validate(6, 3);
  RngStream prng(22);
  const Dataset poisoned = PoisonShard(clean, task, prng);
  const ModelArch arch{{6, 16, 3}};
  RngStream init(23);
  const ParamVector global = InitModel(arch, init);
  RngStream train(24);
  const ParamVector theta =
      TrainBackdooredModel(global, arch, poisoned, {20, 10, 0.1}, train);
  const Dataset triggered = TriggeredTestSet(clean, task.trigger);
  EXPECT_GT(BackdoorAccuracy(theta, arch, triggered, 2), 0.9);
  EXPECT_GT(Evaluate(theta, arch, clean).accuracy, 0.8);
  BackdoorTask bad = task;
  bad.trigger.pixel_index = 6;
  EXPECT_THROW(bad.Validate(6, 3), InvalidArgument);
}

TEST(AttackModel, AucKnownValues) {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(Auc(s, y), 0.75);
  const std::vector<double> tied = {0.5, 0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(Auc(tied, y), 0.5);
  const std::vector<double> perfect = {0.0, 0.1, 0.9, 1.0};
  EXPECT_DOUBLE_EQ(Auc(perfect, y), 1.0);
  const std::vector<int> short_y = {0, 1};
  EXPECT_THROW(Auc(s, short_y), InvalidArgument);
}

TEST(AttackModel, ConfusionCounts) {
  const std::vector<double> s = {0.2, 0.6, 0.4, 0.9};
  const std::vector<int> y = {0, 0, 1, 1};
  const ConfusionMatrix c = Confusion(s, y);
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_DOUBLE_EQ(c.accuracy(), 0.5);
}

TEST(AttackModel, LogisticSeparatesShiftedGaussians) {
  RngStream rng(8);
  FeatureMatrix x;
  std::vector<int> y;
  for (int i = 0; i < 400; ++i) {
    const int label = i % 2;
    x.push_back({rng.Normal(label * 2.0, 1.0), rng.Normal(0.0, 1.0) * 1000.0});
    y.push_back(label);
  }
  LogisticAttackModel clf;
  clf.Fit(x, y);
  EXPECT_GT(Auc(clf.Scores(x), y), 0.88);
  const double p = clf.Score(x[0]);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  const std::vector<int> one_class(x.size(), 1);
  EXPECT_THROW(clf.Fit(x, one_class), InvalidArgument);
  EXPECT_THROW(clf.Fit({}, {}), InvalidArgument);
}

TEST(Mia, ActiveRoundWindow) {
  EXPECT_FALSE(MiaActiveRound(5, 10, 0.4));
  EXPECT_TRUE(MiaActiveRound(6, 10, 0.4));
  EXPECT_TRUE(MiaActiveRound(9, 10, 0.4));
  EXPECT_FALSE(MiaActiveRound(10, 10, 0.4));
  EXPECT_FALSE(MiaActiveRound(9, 10, 0.0));
}

TEST(Mia, ConfigValidation) {
  MiaConfig cfg;
  cfg.mode = MiaMode::kIsolating;
  EXPECT_THROW(cfg.Validate(), InvalidArgument);
  cfg.role = MiaRole::kGlobal;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.ascent_lr = -1.0;
  EXPECT_THROW(cfg.Validate(), InvalidArgument);
  for (auto m : {MiaMode::kPassive, MiaMode::kActiveGradientAscent, MiaMode::kIsolating,
                 MiaMode::kIsolatingGradientAscent}) {
    EXPECT_EQ(ParseMiaMode(MiaModeName(m)), m);
  }
}

TEST(Mia, FeatureWidthAndContent) {
  const ModelArch arch{{3, 4, 2}};
  RngStream rng(2);
  const std::vector<ParamVector> snaps = {InitModel(arch, rng), InitModel(arch, rng)};
  const Example ex{{0.5, -0.5, 1.0}, 1};
  const auto f = MiaFeatures(snaps, arch, ex);
  ASSERT_EQ(f.size(), 6u);
  const LossAndGradient lg = ExampleLossAndGrad(snaps[1], arch, ex);
  EXPECT_DOUBLE_EQ(f[3], lg.loss);
  MiaFeatureSet full;
  full.full_gradient = true;
  EXPECT_EQ(MiaFeatures(snaps, arch, ex, full).size(), 2 * (3 + arch.ParamCount()));
  EXPECT_THROW(MiaFeatures({}, arch, ex), InvalidArgument);
}

TEST(Mia, RunRejectsOverlapAndUnequalSets) {
  const ModelArch arch{{2, 2}};
  RngStream rng(3);
  MiaTrace trace;
  trace.arch = arch;
  trace.snapshots = {InitModel(arch, rng)};
  trace.members.examples = {{{1.0, 2.0}, 0}, {{3.0, 4.0}, 1}};
  trace.nonmembers.examples = {{{1.0, 2.0}, 0}, {{5.0, 6.0}, 1}};
  EXPECT_THROW(MiaRun(trace, {}, rng), InvalidArgument);
  trace.nonmembers.examples.pop_back();
  EXPECT_THROW(MiaRun(trace, {}, rng), InvalidArgument);
}

TEST(Mia, OverfitModelLeaksMembership) {
  RngStream rng(4);
  const Dataset pool = GenBlobs(4, 10, 50, 0.0, 0.5, rng);
  Dataset members, nonmembers;
  members.num_classes = nonmembers.num_classes = 4;
  for (size_t i = 0; i < pool.size(); ++i) {
    (i % 2 == 0 ? members : nonmembers).examples.push_back(pool.examples[i]);
  }
  const ModelArch arch{{10, 64, 4}};
  RngStream init(5);
  ParamVector model = InitModel(arch, init);
  RngStream train(6);
  model = LocalSgd(model, arch, members, {200, 10, 0.2}, train);
  MiaTrace trace;
  trace.arch = arch;
  trace.snapshots = {model};
  trace.members = members;
  trace.nonmembers = nonmembers;
  RngStream r(7);
  EXPECT_GT(MiaRun(trace, {}, r).auc, 0.7);
}

TEST(Mia, ZeroAscentRateIsPassive) {
  const ModelArch arch{{2, 2}};
  RngStream rng(8);
  const ParamVector view = InitModel(arch, rng);
  Dataset targets;
  targets.num_classes = 2;
  targets.examples = {{{1.0, 0.0}, 1}};
  MiaConfig cfg;
  cfg.mode = MiaMode::kActiveGradientAscent;
  cfg.ascent_lr = 0.0;
  cfg.active_fraction = 1.0;
  MiaAdversary adv(cfg, arch, targets, 10);
  ClientUpdate u;
  u.delta = ParamVector(arch.Shapes());
  for (double& x : u.delta.values()) x = rng.Normal();
  ClientUpdate v = u;
  adv.TamperUpdate(5, view, v);
  EXPECT_EQ(u.delta, v.delta);
  cfg.ascent_lr = 0.5;
  MiaAdversary active(cfg, arch, targets, 10);
  active.TamperUpdate(5, view, v);
  EXPECT_GT(MaxAbsDiff(u.delta, v.delta), 0.0);
}

TEST(Mia, GlobalIsolationHasNoViolations) {
  RngStream rng(9);
  const Dataset data = GenBlobs(3, 4, 40, 0.0, 3.0, rng);
  RngStream prng(10);
  const std::vector<Dataset> shards = Partition(data, 4, {}, prng);
  const ModelArch arch{{4, 8, 3}};
  MiaConfig cfg;
  cfg.role = MiaRole::kGlobal;
  cfg.mode = MiaMode::kIsolatingGradientAscent;
  cfg.target_client = 1;
  cfg.active_fraction = 0.5;
  MiaAdversary adv(cfg, arch, shards[1], 10);
  RoundHooks hooks;
  hooks.isolate = [&](size_t r) { return adv.Isolated(r); };
  hooks.adjust_view = [&](size_t r, size_t id, ParamVector& v) { adv.TamperView(r, id, v); };
  hooks.observe = [&](size_t r, const FlState& before, std::span<const ClientUpdate> ups,
                      const std::map<size_t, ParamVector>& views, const ParamVector& next) {
    adv.Observe(r, before, ups, views, next);
  };
  hooks.train_client = [&](size_t, size_t id, const ParamVector& view, PrivacyLedger&,
                           RngStream& r) {
    return ClientUpdateHonest(view, arch, shards[id], {1, 10, 0.1}, id, r);
  };
  ServerConfig server;
  server.rounds = 10;
  server.selection.k = 4;
  RngStream init(11);
  FlState state(InitModel(arch, init));
  RunRounds(state, 4, server, hooks, RngStream(12));
  const MiaTrace trace = adv.Trace({}, {});
  EXPECT_EQ(trace.isolated_rounds, 5u);
  EXPECT_EQ(trace.isolation_violations, 0u);
  EXPECT_EQ(trace.snapshots.size(), 10u);
}

TEST(Propinf, ObservedOthersInvertsFedAvg) {
  RngStream rng(12);
  const ParamVector before = RandomVector(8, rng);
  std::vector<ClientUpdate> ups(3);
  for (size_t i = 0; i < 3; ++i) {
    ups[i].client_id = i;
    ups[i].n_examples = 10 * (i + 1);
    ups[i].delta = RandomVector(8, rng);
  }
  ParamVector after = before;
  after.AddScaled(AggregatePlain(ups), 0.7);
  const ParamVector others = ObservedOthers(before, after, 0.7, 60.0, ups[0]);
  ParamVector expected = 20.0 * ups[1].delta;
  expected.AddScaled(ups[2].delta, 30.0);
  EXPECT_LE(MaxAbsDiff(others, expected), 1e-10);
  EXPECT_THROW(ObservedOthers(before, after, 0.0, 60.0, ups[0]), InvalidArgument);
}

TEST(Propinf, SummarizerWidthAndErrors) {
  const ModelArch arch{{3, 4, 2}};
  RngStream rng(13);
  std::vector<ParamVector> grads;
  for (int i = 0; i < 10; ++i) {
    ParamVector g(arch.Shapes());
    for (double& x : g.values()) x = rng.Normal();
    grads.push_back(std::move(g));
  }
  PropinfConfig cfg;
  cfg.num_components = 3;
  GradientSummarizer s;
  s.Fit(grads, cfg, rng);
  EXPECT_EQ(s.width(), 2u + 3u);
  EXPECT_EQ(s.Summarize(grads[0]).size(), s.width());
  for (const auto& c : s.components()) {
    double n2 = 0.0;
    for (double x : c) n2 += x * x;
    EXPECT_NEAR(n2, 1.0, 1e-9);
  }
  cfg.num_components = 11;
  EXPECT_THROW(s.Fit(grads, cfg, rng), InvalidArgument);
  EXPECT_THROW(s.Fit({}, cfg, rng), InvalidArgument);
}

// A target whose batch carries the property leaves a visible trace in its
// gradient; the attacker recovers it from the observed aggregates.
TEST(Propinf, RecoversPropertyFromSingleClientUpdates) {
  BlobsSpec spec;
  spec.num_classes = 2;
  spec.dim = 6;
  spec.per_class = 400;
  spec.property_fraction = 0.5;
  spec.property_shift = 6.0;
  RngStream rng(14);
  const Dataset pool = GenBlobs(spec, rng);
  Dataset with, without;
  with.num_classes = without.num_classes = 2;
  for (const Example& e : pool.examples) (e.has_property ? with : without).examples.push_back(e);
  const ModelArch arch{{6, 8, 2}};
  RngStream init(15);
  const ParamVector model = InitModel(arch, init);
  std::vector<PropinfObservation> stream;
  RngStream obs(16);
  for (int r = 0; r < 60; ++r) {
    const int truth = r % 2;
    const Dataset& src = truth == 1 ? with : without;
    std::vector<Example> batch;
    for (int i = 0; i < 16; ++i) batch.push_back(src.examples[obs.UniformInt(src.size())]);
    PropinfObservation o;
    o.model = model;
    o.observed_update = -1.0 * LossAndGrad(model, arch, batch).grad;
    o.truth = truth;
    stream.push_back(std::move(o));
  }
  PropinfConfig cfg;
  RngStream collect(17);
  const PropinfSet set = PropinfCollect(stream, arch, with, without, cfg, collect);
  EXPECT_EQ(set.observed_x.size(), 60u);
  RngStream run(18);
  EXPECT_GT(PropinfRun(set, cfg, run).auc, 0.9);
}

}  // namespace
}  // namespace flg
