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

#include "flg/privacy/rdp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "flg/common/error.h"

namespace flg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> BuildOrders() {
  std::vector<double> orders;
  for (int k = 5; k <= 256; ++k) orders.push_back(0.25 * k);  // 1.25 .. 64
  orders.push_back(128.0);
  orders.push_back(256.0);
  return orders;
}

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log(exp(a) - exp(b)) for a >= b.
double LogSub(double a, double b) {
  if (b == kNegInf) return a;
  if (a < b) throw InvalidArgument("LogSub: negative result");
  if (a == b) return kNegInf;
  return a + std::log(-std::expm1(b - a));
}

// log(erfc(x)), accurate where erfc underflows.
double LogErfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  const double r = 1.0 / (x * x);
  const double series = 1.0 - 0.5 * r + 0.75 * r * r - 1.875 * r * r * r +
                        6.5625 * r * r * r * r;
  return -x * x - std::log(x) - 0.5 * std::log(std::numbers::pi) +
         std::log(series);
}

double LogBinomInt(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log E_{x~mu0}[(mu(x)/mu0(x))^alpha] for integer alpha.
double LogMomentInt(double q, double z, int alpha) {
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  double log_a = kNegInf;
  for (int i = 0; i <= alpha; ++i) {
    const double log_coef = LogBinomInt(alpha, i) + i * log_q + (alpha - i) * log_1mq;
    const double s = log_coef + (static_cast<double>(i) * i - i) / (2.0 * z * z);
    log_a = LogAdd(log_a, s);
  }
  return log_a;
}

// Same quantity for fractional alpha: the expectation is split at the point
// z0 where the two mixture components cross and each half is expanded with
// generalized binomial coefficients; the series converges absolutely.
double LogMomentFrac(double q, double z, double alpha) {
  double log_a0 = kNegInf;
  double log_a1 = kNegInf;
  const double sigma2 = z * z;
  const double z0 = sigma2 * std::log(1.0 / q - 1.0) + 0.5;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  double log_abs_coef = 0.0;  // log |binom(alpha, 0)|
  bool coef_positive = true;
  for (int i = 0;; ++i) {
    if (i > 0) {
      const double factor = (alpha - (i - 1)) / static_cast<double>(i);
      log_abs_coef += std::log(std::abs(factor));
      if (factor < 0.0) coef_positive = !coef_positive;
    }
    const double j = alpha - i;
    const double log_t0 = log_abs_coef + i * log_q + j * log_1mq;
    const double log_t1 = log_abs_coef + j * log_q + i * log_1mq;
    const double log_e0 =
        std::log(0.5) + LogErfc((i - z0) / (std::numbers::sqrt2 * z));
    const double log_e1 =
        std::log(0.5) + LogErfc((z0 - j) / (std::numbers::sqrt2 * z));
    const double log_s0 =
        log_t0 + (static_cast<double>(i) * i - i) / (2.0 * sigma2) + log_e0;
    const double log_s1 = log_t1 + (j * j - j) / (2.0 * sigma2) + log_e1;
    if (coef_positive) {
      log_a0 = LogAdd(log_a0, log_s0);
      log_a1 = LogAdd(log_a1, log_s1);
    } else {
      log_a0 = LogSub(log_a0, log_s0);
      log_a1 = LogSub(log_a1, log_s1);
    }
    if (i > alpha && std::max(log_s0, log_s1) < std::max(log_a0, log_a1) - 40.0) {
      break;
    }
    if (i > 100000) throw InvalidArgument("SampledGaussianRdp: series did not converge");
  }
  return LogAdd(log_a0, log_a1);
}

}  // namespace

std::span<const double> RdpOrders() {
  static const std::vector<double> orders = BuildOrders();
  return orders;
}

double SampledGaussianRdp(double q, double z, double alpha) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("sampling rate must be in (0, 1]");
  if (!(z >= 0.0)) throw InvalidArgument("noise multiplier must be >= 0");
  if (!(alpha > 1.0)) throw InvalidArgument("RDP order must exceed 1");
  if (z == 0.0) return kInf;
  if (q == 1.0) return alpha / (2.0 * z * z);
  const double log_a = (alpha == std::floor(alpha))
                           ? LogMomentInt(q, z, static_cast<int>(alpha))
                           : LogMomentFrac(q, z, alpha);
  return log_a / (alpha - 1.0);
}

RdpCurve RdpCurve::SubsampledGaussian(double q, double z, uint64_t steps) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("sampling rate must be in (0, 1]");
  if (!(z >= 0.0)) throw InvalidArgument("noise multiplier must be >= 0");
  RdpCurve curve;
  if (steps == 0) return curve;
  Term t{q, z, steps, {}};
  for (double a : RdpOrders()) t.per_step.push_back(SampledGaussianRdp(q, z, a));
  curve.terms_.push_back(std::move(t));
  return curve;
}

RdpCurve& RdpCurve::operator+=(const RdpCurve& other) {
  for (const Term& t : other.terms_) {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), t, [](const Term& a, const Term& b) {
          return a.q < b.q || (a.q == b.q && a.z < b.z);
        });
    if (it != terms_.end() && it->q == t.q && it->z == t.z) {
      it->steps += t.steps;
    } else {
      terms_.insert(it, t);
    }
  }
  return *this;
}

std::vector<double> RdpCurve::Values() const {
  std::vector<double> out(RdpOrders().size(), 0.0);
  for (const Term& t : terms_) {
    const double s = static_cast<double>(t.steps);
    for (size_t k = 0; k < out.size(); ++k) out[k] += s * t.per_step[k];
  }
  return out;
}

bool RdpCurve::infinite() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.z == 0.0 && t.steps > 0; });
}

uint64_t RdpCurve::total_steps() const {
  uint64_t n = 0;
  for (const Term& t : terms_) n += t.steps;
  return n;
}

double OptimalOrder(std::span<const double> rdp, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0, 1)");
  std::span<const double> orders = RdpOrders();
  if (rdp.size() != orders.size()) throw InvalidArgument("RDP curve length mismatch");
  const double log_inv_delta = std::log(1.0 / delta);
  double best = kInf;
  double best_order = orders.back();
  for (size_t k = 0; k < orders.size(); ++k) {
    const double eps = rdp[k] + log_inv_delta / (orders[k] - 1.0);
    if (eps < best) {
      best = eps;
      best_order = orders[k];
    }
  }
  return best_order;
}

double RdpToDp(std::span<const double> rdp, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0, 1)");
  std::span<const double> orders = RdpOrders();
  if (rdp.size() != orders.size()) throw InvalidArgument("RDP curve length mismatch");
  const double log_inv_delta = std::log(1.0 / delta);
  double best = kInf;
  for (size_t k = 0; k < orders.size(); ++k) {
    best = std::min(best, rdp[k] + log_inv_delta / (orders[k] - 1.0));
  }
  return best;
}

double RdpToDp(const RdpCurve& curve, double delta) {
  if (curve.infinite()) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0, 1)");
    return kInf;
  }
  return RdpToDp(curve.Values(), delta);
}

double CalibrateNoiseMultiplier(double target_eps, double q, uint64_t steps,
                                double delta) {
  if (!(target_eps > 0.0)) throw InvalidArgument("target epsilon must be positive");
  auto eps_at = [&](double z) {
    return RdpToDp(RdpCurve::SubsampledGaussian(q, z, steps), delta);
  };
  double lo = 1e-3;
  double hi = 1e4;
  if (eps_at(hi) > target_eps) {
    throw InvalidArgument("target epsilon unreachable with noise multiplier <= 1e4");
  }
  if (eps_at(lo) <= target_eps) return lo;
  // Bisection in log space; epsilon is non-increasing in z.
  while (hi / lo > 1.0 + 1e-7) {
    const double mid = std::sqrt(lo * hi);
    if (eps_at(mid) > target_eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace flg
