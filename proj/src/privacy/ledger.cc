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

#include "flg/privacy/ledger.h"

#include <cmath>

#include "flg/common/error.h"

namespace flg {

double ExactSum(std::span<const double> values) {
  std::vector<double> partials;
  double special = 0.0;
  for (double x : values) {
    if (!std::isfinite(x)) {
      special += x;
      continue;
    }
    size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (special != 0.0 || std::isnan(special)) return special;

  size_t n = partials.size();
  double hi = 0.0;
  if (n > 0) {
    double lo = 0.0;
    hi = partials[--n];
    while (n > 0) {
      const double x = hi;
      const double y = partials[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round half-even correction when the remaining partials push the exact
    // sum across the midpoint.
    if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) ||
                  (lo > 0.0 && partials[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
  }
  return hi;
}

double SequentialComposition(std::span<const double> epsilons) {
  for (double e : epsilons) {
    if (!(e >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  }
  return ExactSum(epsilons);
}

double GroupPrivacyConvert(double eps_ldp, uint64_t n_participants) {
  if (n_participants == 0) throw InvalidArgument("group size must be >= 1");
  if (!(eps_ldp >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  return static_cast<double>(n_participants) * eps_ldp;
}

PrivacyLedger::PrivacyLedger(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0, 1)");
}

void PrivacyLedger::AccumulateNaive(double eps) {
  if (!(eps >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  naive_.push_back(eps);
}

double PrivacyLedger::RdpEpsilon() const {
  if (rdp_.empty()) return 0.0;
  return RdpToDp(rdp_, delta_);
}

}  // namespace flg
