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

#include "flg/adversary/attack_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flg/common/error.h"

namespace flg {
namespace {

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Solves a x = b for symmetric positive definite a (Cholesky), in place.
std::vector<double> SolveSpd(std::vector<double> a, std::vector<double> b, size_t n) {
  for (size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) throw InvalidArgument("attack model: singular Hessian");
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / d;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

}  // namespace

void LogisticAttackModel::Fit(const FeatureMatrix& x, std::span<const int> labels) {
  if (x.empty() || x.size() != labels.size()) {
    throw InvalidArgument("attack model: need one label per feature row");
  }
  const size_t n = x.size();
  const size_t d = x.front().size();
  for (const auto& row : x) {
    if (row.size() != d) throw InvalidArgument("attack model: ragged feature rows");
  }
  const size_t positives =
      static_cast<size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0 || positives == n) {
    throw InvalidArgument("attack model: both classes must be present");
  }

  mean_.assign(d, 0.0);
  scale_.assign(d, 0.0);
  for (const auto& row : x) {
    for (size_t j = 0; j < d; ++j) mean_[j] += row[j];
  }
  for (double& m : mean_) m /= static_cast<double>(n);
  for (const auto& row : x) {
    for (size_t j = 0; j < d; ++j) scale_[j] += (row[j] - mean_[j]) * (row[j] - mean_[j]);
  }
  for (double& s : scale_) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 1e-12)) s = 1.0;
  }

  // Parameter vector: [bias, w_1..w_d]; the bias is not penalized.
  const size_t p = d + 1;
  std::vector<double> theta(p, 0.0);
  std::vector<double> z(p);
  for (int it = 0; it < max_iters_; ++it) {
    std::vector<double> grad(p, 0.0);
    std::vector<double> hess(p * p, 0.0);
    for (size_t i = 0; i < n; ++i) {
      z[0] = 1.0;
      for (size_t j = 0; j < d; ++j) z[j + 1] = (x[i][j] - mean_[j]) / scale_[j];
      double t = 0.0;
      for (size_t j = 0; j < p; ++j) t += theta[j] * z[j];
      const double mu = Sigmoid(t);
      const double r = mu - static_cast<double>(labels[i]);
      const double w = std::max(mu * (1.0 - mu), 1e-12);
      for (size_t a = 0; a < p; ++a) {
        grad[a] += r * z[a];
        for (size_t b = 0; b <= a; ++b) hess[a * p + b] += w * z[a] * z[b];
      }
    }
    for (size_t a = 0; a < p; ++a) {
      for (size_t b = 0; b < a; ++b) hess[b * p + a] = hess[a * p + b];
    }
    const double ridge = l2_ * static_cast<double>(n);
    for (size_t a = 1; a < p; ++a) {
      grad[a] += ridge * theta[a];
      hess[a * p + a] += ridge;
    }
    hess[0] += 1e-9 * static_cast<double>(n);
    const std::vector<double> step = SolveSpd(hess, grad, p);
    double change = 0.0;
    for (size_t a = 0; a < p; ++a) {
      theta[a] -= step[a];
      change = std::max(change, std::abs(step[a]));
    }
    if (change < 1e-10) break;
  }
  bias_ = theta[0];
  weights_.assign(theta.begin() + 1, theta.end());
}

double LogisticAttackModel::Score(std::span<const double> x) const {
  if (x.size() != weights_.size()) throw InvalidArgument("attack model: width mismatch");
  double t = bias_;
  for (size_t j = 0; j < x.size(); ++j) t += weights_[j] * (x[j] - mean_[j]) / scale_[j];
  return Sigmoid(t);
}

std::vector<double> LogisticAttackModel::Scores(const FeatureMatrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(Score(row));
  return out;
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("AUC: size mismatch");
  std::vector<size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Average ranks over tied groups, then U = R_pos - n_pos (n_pos + 1) / 2.
  double rank_sum = 0.0;
  size_t n_pos = 0;
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[idx[k]] == 1) {
        rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw InvalidArgument("AUC: both classes must be present");
  const double np = static_cast<double>(n_pos);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

ConfusionMatrix Confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold) {
  if (scores.size() != labels.size()) throw InvalidArgument("confusion: size mismatch");
  ConfusionMatrix m;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++m.tp;
    if (predicted && !actual) ++m.fp;
    if (!predicted && actual) ++m.fn;
    if (!predicted && !actual) ++m.tn;
  }
  return m;
}

}  // namespace flg
