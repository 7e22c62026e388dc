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

#include <algorithm>
#include <cmath>
#include <set>

#include "flg/common/error.h"
#include "flg/data/partition.h"
#include "flg/data/synthetic.h"
#include "flg/fl/aggregate.h"
#include "flg/fl/client.h"
#include "flg/fl/engine.h"
#include "flg/privacy/mechanisms.h"

namespace flg {
namespace {

ClientUpdate Update(size_t id, std::vector<double> delta, size_t n) {
  ClientUpdate u;
  u.client_id = id;
  u.delta = ParamVector::Flat(std::move(delta));
  u.n_examples = n;
  return u;
}

TEST(Aggregate, PlainIsExampleWeightedMean) {
  const std::vector<ClientUpdate> ups = {Update(2, {3.0, 0.0}, 30), Update(1, {0.0, 1.0}, 10)};
  const ParamVector agg = AggregatePlain(ups);
  EXPECT_DOUBLE_EQ(agg[0], 3.0 * 0.75);
  EXPECT_DOUBLE_EQ(agg[1], 0.25);
  EXPECT_EQ(AggregationWeights(ups), (std::vector<double>{0.25, 0.75}));
}

TEST(Aggregate, OrderIndependent) {
  std::vector<ClientUpdate> ups = {Update(0, {0.1, 0.2}, 3), Update(1, {0.7, -0.3}, 5),
                                   Update(2, {1e-3, 9.0}, 1)};
  const ParamVector a = AggregatePlain(ups);
  std::reverse(ups.begin(), ups.end());
  EXPECT_EQ(a, AggregatePlain(ups));
}

TEST(Aggregate, RejectsEmptyAndMismatchedShapes) {
  EXPECT_THROW(AggregatePlain({}), InvalidArgument);
  const std::vector<ClientUpdate> ups = {Update(0, {1.0}, 1), Update(1, {1.0, 2.0}, 1)};
  EXPECT_THROW(AggregatePlain(ups), InvalidArgument);
  const std::vector<ClientUpdate> zero = {Update(0, {1.0}, 0)};
  EXPECT_THROW(AggregatePlain(zero), InvalidArgument);
}

TEST(Aggregate, NormBoundClipsEachUpdateThenAverages) {
  const std::vector<ClientUpdate> ups = {Update(0, {30.0, 40.0}, 1), Update(1, {0.3, 0.4}, 99)};
  AggregateDiagnostics diag;
  const ParamVector agg = AggregateNormBound(ups, 1.0, &diag);
  EXPECT_NEAR(agg[0], (0.6 + 0.3) / 2.0, 1e-15);
  EXPECT_NEAR(agg[1], (0.8 + 0.4) / 2.0, 1e-15);
  EXPECT_EQ(diag.pre_clip_norms, (std::vector<double>{50.0, 0.5}));
  EXPECT_NEAR(diag.post_clip_norms[0], 1.0, 1e-15);
  EXPECT_THROW(AggregateNormBound(ups, 0.0), InvalidArgument);
}

TEST(Aggregate, WeakDpChargesGaussianEpsilonPerRound) {
  const std::vector<ClientUpdate> ups = {Update(0, {1.0, 0.0}, 1), Update(1, {0.0, 1.0}, 1)};
  PrivacyLedger ledger;
  RngStream rng(3);
  AggregateDiagnostics diag;
  AggregateWeakDp(ups, 0.5, 0.1, ledger, rng, &diag);
  const double eps0 = GaussianMechanismEpsilon(0.5 / 2.0, 0.1, 1e-5);
  EXPECT_EQ(diag.round_epsilon, eps0);
  EXPECT_EQ(ledger.NaiveEpsilon(), eps0);
}

TEST(Aggregate, WeakDpWithZeroSigmaEqualsNormBound) {
  const std::vector<ClientUpdate> ups = {Update(0, {3.0, 4.0}, 1), Update(1, {0.1, 0.0}, 1)};
  PrivacyLedger ledger;
  RngStream rng(3);
  EXPECT_EQ(AggregateWeakDp(ups, 1.0, 0.0, ledger, rng), AggregateNormBound(ups, 1.0));
}

TEST(Aggregate, CdpChargesSubsampledGaussian) {
  const std::vector<ClientUpdate> ups = {Update(0, {1.0}, 1), Update(1, {2.0}, 1)};
  CdpConfig cfg;
  cfg.clip_bound = 1.0;
  cfg.noise_scale = 1.0;
  cfg.selection_prob = 1.0;
  PrivacyLedger ledger;
  RngStream rng(4);
  AggregateDiagnostics diag;
  AggregateCdp(ups, cfg, ledger, rng, &diag);
  EXPECT_EQ(diag.noise_stddev, 1.0);
  EXPECT_NEAR(ledger.RdpEpsilon(), 5.30, 1e-2);
  EXPECT_EQ(ledger.rdp_steps(), 1u);
}

TEST(Aggregate, BudgetGuard) {
  PrivacyLedger ledger;
  EXPECT_EQ(BudgetGuard(ledger, 1.0, 1e-5), GuardDecision::kContinue);
  ledger.AccumulateSubsampledGaussian(1.0, 1.0, 1);
  EXPECT_EQ(BudgetGuard(ledger, 6.0, 1e-5), GuardDecision::kContinue);
  EXPECT_EQ(BudgetGuard(ledger, 5.0, 1e-5), GuardDecision::kStop);
  EXPECT_THROW(BudgetGuard(ledger, 0.0, 1e-5), InvalidArgument);
}

TEST(Aggregate, KindNamesRoundTrip) {
  for (auto k : {AggregatorKind::kPlain, AggregatorKind::kNormBound, AggregatorKind::kWeakDp,
                 AggregatorKind::kCdp}) {
    EXPECT_EQ(ParseAggregatorKind(AggregatorKindName(k)), k);
  }
  EXPECT_THROW(ParseAggregatorKind("median"), InvalidArgument);
}

TEST(Selection, FixedKIsSortedDistinctAndUniform) {
  RngStream rng(1);
  std::vector<size_t> counts(10, 0);
  for (int t = 0; t < 5000; ++t) {
    RngStream r = rng.Derive("t", t);
    const auto s = SelectClients(10, {SelectionSpec::Mode::kFixedK, 3, 1.0}, r);
    ASSERT_EQ(s.size(), 3u);
    ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
    ASSERT_EQ(std::set<size_t>(s.begin(), s.end()).size(), 3u);
    for (size_t id : s) ++counts[id];
  }
  // Each client is expected 1500 times; 5 sigma is about 160.
  for (size_t c : counts) EXPECT_NEAR(static_cast<double>(c), 1500.0, 160.0);
  EXPECT_THROW(SelectClients(2, {SelectionSpec::Mode::kFixedK, 3, 1.0}, rng), InvalidArgument);
}

TEST(Selection, ProbabilityMode) {
  RngStream rng(2);
  EXPECT_EQ(SelectClients(5, {SelectionSpec::Mode::kProbability, 0, 1.0}, rng).size(), 5u);
  size_t total = 0;
  for (int t = 0; t < 200; ++t) {
    total += SelectClients(100, {SelectionSpec::Mode::kProbability, 0, 0.2}, rng).size();
  }
  EXPECT_NEAR(static_cast<double>(total) / 200.0, 20.0, 1.0);
}

TEST(ServerConfig, Validate) {
  ServerConfig cfg;
  cfg.selection.k = 3;
  EXPECT_NO_THROW(cfg.Validate(3));
  EXPECT_THROW(cfg.Validate(2), InvalidArgument);
  cfg.server_lr = 0.0;
  EXPECT_THROW(cfg.Validate(3), InvalidArgument);
  cfg.server_lr = 1.0;
  cfg.rounds = 0;
  EXPECT_THROW(cfg.Validate(3), InvalidArgument);
}

class EngineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    RngStream rng(10);
    data_ = GenBlobs(3, 4, 60, 0.0, 5.0, rng);
    RngStream prng(11);
    shards_ = Partition(data_, kClients, {}, prng);
    RngStream init(12);
    initial_ = InitModel(arch_, init);
    hooks_.train_client = [this](size_t, size_t id, const ParamVector& view, PrivacyLedger&,
                                 RngStream& rng) {
      return ClientUpdateHonest(view, arch_, shards_[id], {1, 10, 0.1}, id, rng);
    };
  }

  static constexpr size_t kClients = 6;
  const ModelArch arch_{{4, 3}};
  Dataset data_;
  std::vector<Dataset> shards_;
  ParamVector initial_;
  RoundHooks hooks_;
};

TEST_F(EngineTest, TrainingImprovesAccuracyAndIsDeterministic) {
  ServerConfig cfg;
  cfg.rounds = 20;
  cfg.selection.k = 3;
  FlState a(initial_);
  FlState b(initial_);
  const auto ra = RunRounds(a, kClients, cfg, hooks_, RngStream(5));
  const auto rb = RunRounds(b, kClients, cfg, hooks_, RngStream(5));
  ASSERT_EQ(ra.size(), 20u);
  EXPECT_EQ(a.global, b.global);
  for (size_t r = 0; r < ra.size(); ++r) EXPECT_EQ(ra[r].selected, rb[r].selected);
  EXPECT_GT(Evaluate(a.global, arch_, data_).accuracy, 0.9);
  EXPECT_GT(Evaluate(a.global, arch_, data_).accuracy,
            Evaluate(initial_, arch_, data_).accuracy);
}

TEST_F(EngineTest, SingleRoundMatchesManualFedAvg) {
  ServerConfig cfg;
  cfg.rounds = 1;
  cfg.selection.k = kClients;
  cfg.server_lr = 0.5;
  std::vector<ClientUpdate> manual;
  FlState state(initial_);
  const RngStream root(6);
  hooks_.observe = [&](size_t, const FlState&, std::span<const ClientUpdate> ups,
                       const std::map<size_t, ParamVector>& views, const ParamVector&) {
    manual.assign(ups.begin(), ups.end());
    for (const auto& [id, view] : views) EXPECT_EQ(view, initial_);
  };
  RunRounds(state, kClients, cfg, hooks_, root);
  ParamVector expected = initial_;
  expected.AddScaled(AggregatePlain(manual), 0.5);
  EXPECT_EQ(state.global, expected);
}

TEST_F(EngineTest, WeakDpLedgerIsRoundsTimesPerRoundEpsilon) {
  ServerConfig cfg;
  cfg.aggregator = AggregatorKind::kWeakDp;
  cfg.norm_threshold = 0.3;
  cfg.weak_dp_sigma = 0.05;
  cfg.selection.k = 3;
  const double eps0 = GaussianMechanismEpsilon(0.3 / 3.0, 0.05, 1e-5);
  for (size_t r : {1u, 10u, 300u}) {
    cfg.rounds = r;
    FlState state(initial_);
    const auto recs = RunRounds(state, kClients, cfg, hooks_, RngStream(7));
    ASSERT_EQ(recs.size(), r);
    EXPECT_EQ(*recs.back().eps_spent, static_cast<double>(r) * eps0) << r;
  }
}

TEST_F(EngineTest, CdpStopsWhenBudgetExhausted) {
  ServerConfig cfg;
  cfg.aggregator = AggregatorKind::kCdp;
  cfg.cdp.noise_scale = 1.0;
  cfg.cdp.clip_bound = 1.0;
  cfg.cdp.selection_prob = 0.5;
  cfg.cdp.sigma_mode = SigmaMode::kPerClientZsOverC;
  cfg.cdp.budget_threshold = 3.0;
  cfg.rounds = 1000;
  cfg.selection.k = 3;
  FlState state(initial_);
  const auto recs = RunRounds(state, kClients, cfg, hooks_, RngStream(8));
  EXPECT_TRUE(state.stopped);
  EXPECT_EQ(state.stop_reason, "privacy budget exhausted");
  ASSERT_FALSE(recs.empty());
  EXPECT_LT(recs.size(), 1000u);
  // The guard runs before each round, so the final spend crossed the budget
  // only in the last completed round.
  EXPECT_GT(*recs.back().eps_spent, 3.0);
  if (recs.size() > 1) {
    EXPECT_LE(*recs[recs.size() - 2].eps_spent, 3.0);
  }
}

TEST_F(EngineTest, IsolatedClientReceivesItsOwnLastModel) {
  ServerConfig cfg;
  cfg.rounds = 4;
  cfg.selection.k = kClients;
  size_t violations = 0;
  std::map<size_t, ParamVector> last;
  hooks_.isolate = [](size_t round) {
    return round >= 1 ? std::vector<size_t>{2} : std::vector<size_t>{};
  };
  hooks_.observe = [&](size_t round, const FlState& before, std::span<const ClientUpdate> ups,
                       const std::map<size_t, ParamVector>& views, const ParamVector&) {
    if (round >= 1 && views.at(2) != last.at(2)) ++violations;
    if (round >= 1 && views.at(0) != before.global) ++violations;
    for (const ClientUpdate& u : ups) last.insert_or_assign(u.client_id, views.at(u.client_id) + u.delta);
  };
  FlState state(initial_);
  RunRounds(state, kClients, cfg, hooks_, RngStream(9));
  EXPECT_EQ(violations, 0u);
}

TEST_F(EngineTest, OverrideSelectionForcesParticipant) {
  ServerConfig cfg;
  cfg.rounds = 5;
  cfg.selection.k = 1;
  hooks_.override_selection = [](size_t, const std::vector<size_t>& sel, RngStream&) {
    std::vector<size_t> out = sel;
    out.push_back(4);
    return out;
  };
  FlState state(initial_);
  for (const RoundRecord& rec : RunRounds(state, kClients, cfg, hooks_, RngStream(10))) {
    EXPECT_TRUE(std::count(rec.participants.begin(), rec.participants.end(), 4u) == 1);
    EXPECT_EQ(rec.selected.size(), 1u);
  }
}

TEST_F(EngineTest, LdpClientsHavePerClientLedgers) {
  ServerConfig cfg;
  cfg.rounds = 3;
  cfg.selection.k = 2;
  DpSgdConfig dp;
  dp.clip_bound = 1.0;
  dp.noise_multiplier = 1.0;
  dp.sampling_prob = 0.2;
  dp.epochs = 1;
  dp.lr = 0.1;
  hooks_.train_client = [&](size_t, size_t id, const ParamVector& view, PrivacyLedger& ledger,
                            RngStream& rng) {
    return ClientUpdateLdp(view, arch_, shards_[id], dp, &ledger, id, rng);
  };
  FlState state(initial_);
  const auto recs = RunRounds(state, kClients, cfg, hooks_, RngStream(11));
  EXPECT_FALSE(state.client_ledgers.empty());
  double worst = 0.0;
  for (const auto& [id, l] : state.client_ledgers) worst = std::max(worst, l.RdpEpsilon());
  EXPECT_EQ(*recs.back().eps_spent, worst);
  EXPECT_TRUE(state.ledger.rdp().empty());
}

TEST(Client, LocalSgdClipBoundsTheUpdate) {
  RngStream rng(1);
  const Dataset d = GenBlobs(2, 3, 20, 0.0, 4.0, rng);
  const ModelArch arch{{3, 2}};
  const ParamVector m = InitModel(arch, rng);
  RngStream r(2);
  const ClientUpdate u = ClientUpdateClipped(m, arch, d, {3, 5, 1.0}, 0.05, 0, r);
  EXPECT_LE(u.delta.L2Norm(), 0.05 + 1e-12);
  EXPECT_EQ(u.n_examples, d.size());
}

}  // namespace
}  // namespace flg
