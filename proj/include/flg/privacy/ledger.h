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

#ifndef FLG_PRIVACY_LEDGER_H_
#define FLG_PRIVACY_LEDGER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "flg/privacy/rdp.h"

namespace flg {

// Correctly rounded sum of `values` (Shewchuk partials, as in Python's
// math.fsum). r copies of x therefore sum to exactly the double r * x.
double ExactSum(std::span<const double> values);

// Basic sequential composition: the exact sum of the per-mechanism epsilons.
// Throws InvalidArgument on a negative entry.
double SequentialComposition(std::span<const double> epsilons);

// Participant-level upper bound from a record-level epsilon: n * eps.
double GroupPrivacyConvert(double eps_ldp, uint64_t n_participants);

// Privacy spend of one run. Two trackers are kept side by side: an RDP curve
// for subsampled-Gaussian steps (converted to (eps, delta) on query) and a
// list of per-mechanism epsilons composed sequentially. Both only grow.
// Not thread-safe; a single writer owns it.
class PrivacyLedger {
 public:
  explicit PrivacyLedger(double delta = 1e-5);

  void AccumulateRdp(const RdpCurve& curve) { rdp_ += curve; }
  void AccumulateSubsampledGaussian(double q, double z, uint64_t steps = 1) {
    rdp_ += RdpCurve::SubsampledGaussian(q, z, steps);
  }
  void AccumulateNaive(double eps);

  const RdpCurve& rdp() const { return rdp_; }
  uint64_t rdp_steps() const { return rdp_.total_steps(); }
  // (eps, delta) from the RDP curve; 0 when nothing was accumulated.
  double RdpEpsilon() const;
  double NaiveEpsilon() const { return SequentialComposition(naive_); }
  std::span<const double> naive_entries() const { return naive_; }
  double delta() const { return delta_; }

 private:
  double delta_;
  RdpCurve rdp_;
  std::vector<double> naive_;
};

}  // namespace flg

#endif  // FLG_PRIVACY_LEDGER_H_
