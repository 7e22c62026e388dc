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

#include "flg/fl/aggregate.h"

#include <algorithm>
#include <string>

#include "flg/common/error.h"
#include "flg/privacy/mechanisms.h"
#include "flg/privacy/rdp.h"

namespace flg {
namespace {

std::vector<const ClientUpdate*> SortedById(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw InvalidArgument("aggregation needs at least one update");
  std::vector<const ClientUpdate*> sorted;
  sorted.reserve(updates.size());
  for (const ClientUpdate& u : updates) {
    if (!u.delta.SameShape(updates.front().delta)) {
      throw InvalidArgument("client " + std::to_string(u.client_id) +
                            " sent a delta of the wrong shape");
    }
    sorted.push_back(&u);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ClientUpdate* a, const ClientUpdate* b) {
                     return a->client_id < b->client_id;
                   });
  return sorted;
}

// Mean of the deltas after scaling each into the `bound` ball.
ParamVector ClippedMean(const std::vector<const ClientUpdate*>& sorted,
                        double bound, AggregateDiagnostics* diag) {
  ParamVector sum = sorted.front()->delta.ZerosLike();
  for (const ClientUpdate* u : sorted) {
    ParamVector d = u->delta;
    const double pre = ClipInPlace(d, bound);
    if (diag != nullptr) {
      diag->pre_clip_norms.push_back(pre);
      diag->post_clip_norms.push_back(d.L2Norm());
    }
    sum += d;
  }
  sum *= 1.0 / static_cast<double>(sorted.size());
  return sum;
}

}  // namespace

AggregatorKind ParseAggregatorKind(std::string_view name) {
  if (name == "plain") return AggregatorKind::kPlain;
  if (name == "norm_bound") return AggregatorKind::kNormBound;
  if (name == "weak_dp") return AggregatorKind::kWeakDp;
  if (name == "cdp") return AggregatorKind::kCdp;
  throw InvalidArgument("unknown aggregator '" + std::string(name) + "'");
}

std::string_view AggregatorKindName(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::kPlain:
      return "plain";
    case AggregatorKind::kNormBound:
      return "norm_bound";
    case AggregatorKind::kWeakDp:
      return "weak_dp";
    case AggregatorKind::kCdp:
      return "cdp";
  }
  return "plain";
}

std::vector<double> AggregationWeights(std::span<const ClientUpdate> updates) {
  std::vector<const ClientUpdate*> sorted = SortedById(updates);
  double total = 0.0;
  for (const ClientUpdate* u : sorted) total += static_cast<double>(u->n_examples);
  if (!(total > 0.0)) throw InvalidArgument("aggregation weights: zero total examples");
  std::vector<double> w;
  w.reserve(sorted.size());
  for (const ClientUpdate* u : sorted) w.push_back(static_cast<double>(u->n_examples) / total);
  return w;
}

ParamVector AggregatePlain(std::span<const ClientUpdate> updates,
                           AggregateDiagnostics* diag) {
  std::vector<const ClientUpdate*> sorted = SortedById(updates);
  const std::vector<double> w = AggregationWeights(updates);
  ParamVector out = sorted.front()->delta.ZerosLike();
  for (size_t k = 0; k < sorted.size(); ++k) {
    if (diag != nullptr) {
      const double n = sorted[k]->delta.L2Norm();
      diag->pre_clip_norms.push_back(n);
      diag->post_clip_norms.push_back(n);
    }
    out.AddScaled(sorted[k]->delta, w[k]);
  }
  return out;
}

ParamVector AggregateNormBound(std::span<const ClientUpdate> updates,
                               double threshold, AggregateDiagnostics* diag) {
  if (!(threshold > 0.0)) throw InvalidArgument("norm threshold must be positive");
  return ClippedMean(SortedById(updates), threshold, diag);
}

ParamVector AggregateWeakDp(std::span<const ClientUpdate> updates,
                            double threshold, double sigma,
                            PrivacyLedger& ledger, RngStream& rng,
                            AggregateDiagnostics* diag) {
  if (!(threshold > 0.0)) throw InvalidArgument("norm threshold must be positive");
  if (!(sigma >= 0.0)) throw InvalidArgument("weak DP sigma must be >= 0");
  std::vector<const ClientUpdate*> sorted = SortedById(updates);
  ParamVector out = ClippedMean(sorted, threshold, diag);
  AddGaussianNoise(out, sigma, rng);
  const double sensitivity = threshold / static_cast<double>(sorted.size());
  const double eps = GaussianMechanismEpsilon(sensitivity, sigma, ledger.delta());
  ledger.AccumulateNaive(eps);
  if (diag != nullptr) {
    diag->noise_stddev = sigma;
    diag->round_epsilon = eps;
  }
  return out;
}

ParamVector AggregateCdp(std::span<const ClientUpdate> updates,
                         const CdpConfig& cfg, PrivacyLedger& ledger,
                         RngStream& rng, AggregateDiagnostics* diag) {
  cfg.Validate();
  std::vector<const ClientUpdate*> sorted = SortedById(updates);
  ParamVector out = ClippedMean(sorted, cfg.clip_bound, diag);
  const double sigma = CdpSigma(cfg, sorted.size());
  AddGaussianNoise(out, sigma, rng);
  ledger.AccumulateSubsampledGaussian(cfg.selection_prob, cfg.noise_scale, 1);
  if (diag != nullptr) diag->noise_stddev = sigma;
  return out;
}

GuardDecision BudgetGuard(const PrivacyLedger& ledger, double budget, double delta) {
  if (!(budget > 0.0)) throw InvalidArgument("privacy budget must be positive");
  if (ledger.rdp().empty()) return GuardDecision::kContinue;
  return RdpToDp(ledger.rdp(), delta) > budget ? GuardDecision::kStop
                                               : GuardDecision::kContinue;
}

}  // namespace flg
