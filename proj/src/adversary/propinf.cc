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

#include "flg/adversary/propinf.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flg/common/error.h"

namespace flg {
namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void Normalize(std::vector<double>& v) {
  const double n = std::sqrt(Dot(v, v));
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

Dataset SampleBatch(const Dataset& pool, size_t batch_size, RngStream& rng) {
  std::vector<size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  const size_t take = std::min(batch_size, pool.size());
  for (size_t i = 0; i < take; ++i) {
    const size_t j = i + static_cast<size_t>(rng.UniformInt(pool.size() - i));
    std::swap(idx[i], idx[j]);
  }
  Dataset batch;
  batch.num_classes = pool.num_classes;
  for (size_t i = 0; i < take; ++i) batch.examples.push_back(pool.examples[idx[i]]);
  return batch;
}

ParamVector UnitNorm(ParamVector v) {
  const double n = std::sqrt(Dot(v.values(), v.values()));
  if (n > 0.0) v *= 1.0 / n;
  return v;
}

}  // namespace

void GradientSummarizer::Fit(std::span<const ParamVector> grads, const PropinfConfig& cfg,
                             RngStream& rng) {
  if (grads.empty()) throw InvalidArgument("summarizer: no gradients");
  if (cfg.num_components > grads.size()) {
    throw InvalidArgument("summarizer: more components than gradients");
  }
  layer_norms_ = cfg.layer_norms;
  num_layers_ = grads.front().shapes().size();
  const size_t d = grads.front().size();
  mean_.assign(d, 0.0);
  for (const ParamVector& g : grads) {
    for (size_t i = 0; i < d; ++i) mean_[i] += g[i];
  }
  for (double& m : mean_) m /= static_cast<double>(grads.size());

  std::vector<std::vector<double>> centered;
  centered.reserve(grads.size());
  for (const ParamVector& g : grads) {
    std::vector<double> c(d);
    for (size_t i = 0; i < d; ++i) c[i] = g[i] - mean_[i];
    centered.push_back(std::move(c));
  }

  components_.clear();
  for (size_t k = 0; k < cfg.num_components; ++k) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.Normal();
    for (int it = 0; it < 200; ++it) {
      for (const auto& c : components_) {
        const double p = Dot(v, c);
        for (size_t i = 0; i < d; ++i) v[i] -= p * c[i];
      }
      Normalize(v);
      std::vector<double> next(d, 0.0);
      for (const auto& row : centered) {
        const double p = Dot(row, v);
        for (size_t i = 0; i < d; ++i) next[i] += p * row[i];
      }
      v = std::move(next);
    }
    for (const auto& c : components_) {
      const double p = Dot(v, c);
      for (size_t i = 0; i < d; ++i) v[i] -= p * c[i];
    }
    Normalize(v);
    components_.push_back(std::move(v));
  }
}

size_t GradientSummarizer::width() const {
  return (layer_norms_ ? num_layers_ : 0) + components_.size();
}

std::vector<double> GradientSummarizer::Summarize(const ParamVector& grad) const {
  if (grad.size() != mean_.size()) throw InvalidArgument("summarizer: width mismatch");
  std::vector<double> out;
  out.reserve(width());
  if (layer_norms_) {
    for (size_t l = 0; l < num_layers_; ++l) out.push_back(grad.LayerNorm(l));
  }
  std::vector<double> c(grad.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = grad[i] - mean_[i];
  for (const auto& comp : components_) out.push_back(Dot(c, comp));
  return out;
}

PropinfSet PropinfCollect(std::span<const PropinfObservation> stream,
                          const ModelArch& arch, const Dataset& aux_with,
                          const Dataset& aux_without, const PropinfConfig& cfg,
                          RngStream& rng, const LocalSimulator& simulate) {
  if (aux_with.empty() || aux_without.empty()) {
    throw InvalidArgument("property inference needs both auxiliary sets");
  }
  if (cfg.batch_size == 0) throw InvalidArgument("property inference batch size is 0");
  if (stream.empty()) throw InvalidArgument("property inference: no observed rounds");

  std::vector<ParamVector> grads;
  std::vector<int> labels;
  for (size_t r = 0; r < stream.size(); ++r) {
    RngStream batch_rng = rng.Derive("propinf-batch", r);
    const size_t m = std::max<size_t>(stream[r].contributors, 1);
    auto grad_on = [&](const Dataset& pool) {
      const Dataset batch = SampleBatch(pool, cfg.batch_size, batch_rng);
      if (simulate) return simulate(stream[r].model, batch, batch_rng);
      return LossAndGrad(stream[r].model, arch, batch.examples).grad;
    };
    ParamVector with = grad_on(aux_with);
    ParamVector without = grad_on(aux_without);
    for (size_t i = 1; i < m; ++i) {
      with += grad_on(aux_without);
      without += grad_on(aux_without);
    }
    grads.push_back(UnitNorm(std::move(with)));
    labels.push_back(1);
    grads.push_back(UnitNorm(std::move(without)));
    labels.push_back(0);
  }
  GradientSummarizer summarizer;
  RngStream pca_rng = rng.Derive("propinf-pca");
  summarizer.Fit(grads, cfg, pca_rng);

  PropinfSet set;
  set.rounds = stream.size();
  for (const ParamVector& g : grads) set.train_x.push_back(summarizer.Summarize(g));
  set.train_y = std::move(labels);
  for (const PropinfObservation& o : stream) {
    ParamVector g = o.observed_update;
    g *= -1.0;
    set.observed_x.push_back(summarizer.Summarize(UnitNorm(std::move(g))));
    set.observed_truth.push_back(o.truth);
  }
  return set;
}

AttackReport PropinfRun(const PropinfSet& set, const PropinfConfig& cfg, RngStream&) {
  LogisticAttackModel clf;
  clf.Fit(set.train_x, set.train_y);
  AttackReport report;
  report.attack = "property_inference";
  report.per_round = clf.Scores(set.observed_x);
  report.confusion = Confusion(report.per_round, set.observed_truth);
  report.accuracy = report.confusion.accuracy();
  report.auc = Auc(report.per_round, set.observed_truth);
  report.rounds = set.rounds;
  report.config = {
      {"classifier", "logistic_regression"},
      {"num_components", std::to_string(cfg.num_components)},
      {"layer_norms", cfg.layer_norms ? "true" : "false"},
      {"batch_size", std::to_string(cfg.batch_size)},
      {"rounds", std::to_string(set.rounds)},
  };
  return report;
}

ParamVector ObservedOthers(const ParamVector& before, const ParamVector& after,
                           double server_lr, double n_total, const ClientUpdate& own) {
  if (!(server_lr > 0.0) || !(n_total > 0.0)) {
    throw InvalidArgument("ObservedOthers: server_lr and n_total must be positive");
  }
  ParamVector out = after - before;
  out *= n_total / server_lr;
  out.AddScaled(own.delta, -static_cast<double>(own.n_examples));
  return out;
}

}  // namespace flg
