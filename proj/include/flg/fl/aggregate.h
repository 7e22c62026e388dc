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

#ifndef FLG_FL_AGGREGATE_H_
#define FLG_FL_AGGREGATE_H_

#include <span>
#include <string_view>
#include <vector>

#include "flg/common/rng.h"
#include "flg/fl/client.h"
#include "flg/privacy/cdp.h"
#include "flg/privacy/ledger.h"

namespace flg {

enum class AggregatorKind { kPlain, kNormBound, kWeakDp, kCdp };

AggregatorKind ParseAggregatorKind(std::string_view name);
std::string_view AggregatorKindName(AggregatorKind kind);

// Per-round server-side numbers, in client-id order.
struct AggregateDiagnostics {
  std::vector<double> pre_clip_norms;
  std::vector<double> post_clip_norms;
  double noise_stddev = 0.0;
  double round_epsilon = 0.0;  // weak DP only
};

// All aggregators reduce in ascending client-id order, so the result does not
// depend on the order updates arrive in.

// FedAvg weights n_k / sum(n).
std::vector<double> AggregationWeights(std::span<const ClientUpdate> updates);

// sum_k (n_k / n) delta_k.
ParamVector AggregatePlain(std::span<const ClientUpdate> updates,
                           AggregateDiagnostics* diag = nullptr);

// Unweighted mean of delta_k / max(1, ||delta_k|| / T).
ParamVector AggregateNormBound(std::span<const ClientUpdate> updates,
                               double threshold,
                               AggregateDiagnostics* diag = nullptr);

// Norm-bounded mean plus N(0, sigma^2 I). Charges the ledger's sequential
// tracker with the classical Gaussian-mechanism epsilon at sensitivity T / C.
ParamVector AggregateWeakDp(std::span<const ClientUpdate> updates,
                            double threshold, double sigma,
                            PrivacyLedger& ledger, RngStream& rng,
                            AggregateDiagnostics* diag = nullptr);

// Central DP: every delta is (re-)clipped to S, averaged over C, and
// N(0, CdpSigma^2 I) is added. The ledger's RDP tracker advances by one
// (q, z) sampled-Gaussian step.
ParamVector AggregateCdp(std::span<const ClientUpdate> updates,
                         const CdpConfig& cfg, PrivacyLedger& ledger,
                         RngStream& rng, AggregateDiagnostics* diag = nullptr);

enum class GuardDecision { kContinue, kStop };

// Stop iff the RDP epsilon spent at `delta` exceeds `budget`.
GuardDecision BudgetGuard(const PrivacyLedger& ledger, double budget, double delta);

}  // namespace flg

#endif  // FLG_FL_AGGREGATE_H_
