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

#ifndef FLG_PRIVACY_RDP_H_
#define FLG_PRIVACY_RDP_H_

#include <cstdint>
#include <span>
#include <vector>

namespace flg {

// Renyi orders used everywhere: 1.25, 1.5, ..., 64 and then 128, 256.
std::span<const double> RdpOrders();

// Per-step RDP of the sampled Gaussian mechanism with sampling rate q and
// noise multiplier z (noise stddev / sensitivity) at order alpha > 1.
//
// Integer orders use the exact binomial expansion of E[(mu/mu0)^alpha];
// fractional orders use the two-sided convergent series with erfc tails.
// q == 1 is the plain Gaussian mechanism, alpha / (2 z^2). z == 0 gives +inf.
double SampledGaussianRdp(double q, double z, double alpha);

// RDP curve of a composition of sampled Gaussian mechanisms.
//
// The curve is stored as a sorted list of (q, z, steps) terms and evaluated
// as sum(steps * per-step value). Composing two curves merges the step counts
// of identical mechanisms, so curve(a) + curve(b) and curve(a + b) evaluate to
// bitwise identical values.
class RdpCurve {
 public:
  RdpCurve() = default;

  // `steps` repetitions of the (q, z) sampled Gaussian. Throws
  // InvalidArgument unless 0 < q <= 1 and z >= 0.
  static RdpCurve SubsampledGaussian(double q, double z, uint64_t steps);

  RdpCurve& operator+=(const RdpCurve& other);
  friend RdpCurve operator+(RdpCurve a, const RdpCurve& b) { return a += b; }

  // epsilon(alpha) at every order of RdpOrders(), in order.
  std::vector<double> Values() const;
  // True when some term has z == 0 and a non-zero step count.
  bool infinite() const;
  bool empty() const { return terms_.empty(); }
  uint64_t total_steps() const;

  struct Term {
    double q;
    double z;
    uint64_t steps;
    std::vector<double> per_step;  // one value per order
  };
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

// Spec-level name for the accountant query.
inline RdpCurve RdpSubsampledGaussian(double q, double z, uint64_t steps) {
  return RdpCurve::SubsampledGaussian(q, z, steps);
}

// epsilon = min over orders of [rdp(alpha) + ln(1/delta) / (alpha - 1)].
// Returns +inf for an infinite curve.
double RdpToDp(std::span<const double> rdp, double delta);
double RdpToDp(const RdpCurve& curve, double delta);

// Order attaining the minimum in RdpToDp.
double OptimalOrder(std::span<const double> rdp, double delta);

// Smallest noise multiplier z (to ~1e-6 relative) such that `steps` sampled
// Gaussian steps at rate q stay within target_eps at delta. Throws when the
// target is unreachable for z <= 1e4.
double CalibrateNoiseMultiplier(double target_eps, double q, uint64_t steps,
                                double delta);

}  // namespace flg

#endif  // FLG_PRIVACY_RDP_H_
