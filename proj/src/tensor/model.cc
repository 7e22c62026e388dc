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

#include "flg/tensor/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "flg/common/error.h"

namespace flg {
namespace {

// Activations for one example: acts[0] is the input, acts[l] the output of
// layer l (post-ReLU for hidden layers, softmax probabilities for the last).
struct Trace {
  std::vector<std::vector<double>> acts;
  double loss = 0.0;
};

void CheckModel(const ParamVector& model, const ModelArch& arch) {
  arch.Validate();
  if (model.size() != arch.ParamCount()) {
    throw InvalidArgument("model has " + std::to_string(model.size()) +
                          " parameters, architecture expects " +
                          std::to_string(arch.ParamCount()));
  }
}

void CheckExample(const ModelArch& arch, const Example& ex) {
  if (ex.features.size() != arch.input_width()) {
    throw InvalidArgument("feature width " + std::to_string(ex.features.size()) +
                          " does not match input width " +
                          std::to_string(arch.input_width()));
  }
  if (ex.label >= arch.num_classes()) {
    throw InvalidArgument("label " + std::to_string(ex.label) +
                          " out of range for " +
                          std::to_string(arch.num_classes()) + " classes");
  }
}

// Softmax in place; returns log-sum-exp of the logits.
double SoftmaxInPlace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return m + std::log(sum);
}

Trace Forward(const ParamVector& model, const ModelArch& arch,
              std::span<const double> x, const size_t* label) {
  const std::vector<LayerShape> shapes = arch.Shapes();
  Trace t;
  t.acts.reserve(shapes.size() + 1);
  t.acts.emplace_back(x.begin(), x.end());
  std::span<const double> w = model.values();
  for (size_t l = 0; l < shapes.size(); ++l) {
    const LayerShape& s = shapes[l];
    const std::vector<double>& in = t.acts.back();
    std::vector<double> z(s.rows);
    for (size_t o = 0; o < s.rows; ++o) {
      const double* row = w.data() + s.weight_offset + o * s.cols;
      double acc = w[s.bias_offset() + o];
      for (size_t i = 0; i < s.cols; ++i) acc += row[i] * in[i];
      z[o] = acc;
    }
    const bool last = (l + 1 == shapes.size());
    if (last) {
      for (double v : z) {
        if (!std::isfinite(v)) throw DivergenceError("non-finite logit");
      }
      const double zy = label != nullptr ? z[*label] : 0.0;
      const double lse = SoftmaxInPlace(z);
      if (label != nullptr) {
        t.loss = lse - zy;
        if (!std::isfinite(t.loss)) throw DivergenceError("non-finite loss");
      }
    } else {
      for (double& v : z) {
        if (!std::isfinite(v)) throw DivergenceError("non-finite activation");
        v = std::max(v, 0.0);
      }
    }
    t.acts.push_back(std::move(z));
  }
  return t;
}

// Accumulates scale * d(loss)/d(params) for one example into `grad`.
void Backward(const ParamVector& model, const std::vector<LayerShape>& shapes,
              const Trace& t, size_t label, double scale, ParamVector& grad) {
  std::span<const double> w = model.values();
  std::span<double> g = grad.values();
  std::vector<double> delta = t.acts.back();
  delta[label] -= 1.0;
  for (size_t l = shapes.size(); l-- > 0;) {
    const LayerShape& s = shapes[l];
    const std::vector<double>& in = t.acts[l];
    for (size_t o = 0; o < s.rows; ++o) {
      const double d = scale * delta[o];
      double* grow = g.data() + s.weight_offset + o * s.cols;
      for (size_t i = 0; i < s.cols; ++i) grow[i] += d * in[i];
      g[s.bias_offset() + o] += d;
    }
    if (l == 0) break;
    std::vector<double> prev(s.cols, 0.0);
    for (size_t o = 0; o < s.rows; ++o) {
      const double* row = w.data() + s.weight_offset + o * s.cols;
      for (size_t i = 0; i < s.cols; ++i) prev[i] += row[i] * delta[o];
    }
    // ReLU derivative, taken as 0 at the kink.
    for (size_t i = 0; i < s.cols; ++i) {
      if (in[i] <= 0.0) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
}

}  // namespace

void ModelArch::Validate() const {
  if (layer_widths.size() < 2) {
    throw InvalidArgument("architecture needs at least 2 layer widths");
  }
  for (size_t w : layer_widths) {
    if (w == 0) throw InvalidArgument("architecture has a zero-width layer");
  }
  if (layer_widths.back() < 2) {
    throw InvalidArgument("output width must be >= 2 classes");
  }
}

std::vector<LayerShape> ModelArch::Shapes() const {
  std::vector<LayerShape> shapes;
  size_t offset = 0;
  for (size_t l = 0; l + 1 < layer_widths.size(); ++l) {
    LayerShape s{layer_widths[l + 1], layer_widths[l], offset};
    offset += s.param_count();
    shapes.push_back(s);
  }
  return shapes;
}

size_t ModelArch::ParamCount() const {
  size_t n = 0;
  for (size_t l = 0; l + 1 < layer_widths.size(); ++l) {
    n += layer_widths[l + 1] * layer_widths[l] + layer_widths[l + 1];
  }
  return n;
}

ParamVector InitModel(const ModelArch& arch, RngStream& rng) {
  arch.Validate();
  ParamVector p(arch.Shapes());
  for (const LayerShape& s : p.shapes()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(s.cols));
    for (size_t i = 0; i < s.rows * s.cols; ++i) {
      p[s.weight_offset + i] = bound * (2.0 * rng.Uniform() - 1.0);
    }
  }
  return p;
}

LossAndGradient ExampleLossAndGrad(const ParamVector& model,
                                   const ModelArch& arch, const Example& ex) {
  CheckModel(model, arch);
  CheckExample(arch, ex);
  const Trace t = Forward(model, arch, ex.features, &ex.label);
  LossAndGradient out{t.loss, ParamVector(arch.Shapes())};
  Backward(model, out.grad.shapes(), t, ex.label, 1.0, out.grad);
  return out;
}

std::vector<ParamVector> PerExampleGrads(const ParamVector& model,
                                         const ModelArch& arch, Batch batch) {
  if (batch.empty()) throw InvalidArgument("PerExampleGrads: empty batch");
  std::vector<ParamVector> grads;
  grads.reserve(batch.size());
  for (const Example& ex : batch) {
    grads.push_back(ExampleLossAndGrad(model, arch, ex).grad);
  }
  return grads;
}

LossAndGradient LossAndGrad(const ParamVector& model, const ModelArch& arch,
                            Batch batch) {
  if (batch.empty()) throw InvalidArgument("LossAndGrad: empty batch");
  CheckModel(model, arch);
  const std::vector<LayerShape> shapes = arch.Shapes();
  LossAndGradient out{0.0, ParamVector(shapes)};
  // Per-example gradients are formed separately and then summed so the result
  // is bitwise the mean of PerExampleGrads.
  ParamVector one(shapes);
  for (const Example& ex : batch) {
    CheckExample(arch, ex);
    const Trace t = Forward(model, arch, ex.features, &ex.label);
    std::fill(one.values().begin(), one.values().end(), 0.0);
    Backward(model, shapes, t, ex.label, 1.0, one);
    out.grad += one;
    out.loss += t.loss;
  }
  const double n = static_cast<double>(batch.size());
  out.loss /= n;
  out.grad *= 1.0 / n;
  return out;
}

std::vector<double> Predict(const ParamVector& model, const ModelArch& arch,
                            std::span<const double> features) {
  CheckModel(model, arch);
  if (features.size() != arch.input_width()) {
    throw InvalidArgument("Predict: feature width mismatch");
  }
  return Forward(model, arch, features, nullptr).acts.back();
}

size_t PredictLabel(const ParamVector& model, const ModelArch& arch,
                    std::span<const double> features) {
  const std::vector<double> p = Predict(model, arch, features);
  return static_cast<size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

ParamVector SgdStep(const ParamVector& model, const ParamVector& grad,
                    double lr) {
  ParamVector out = model;
  out.AddScaled(grad, -lr);
  return out;
}

EvalResult Evaluate(const ParamVector& model, const ModelArch& arch,
                    const Dataset& dataset) {
  if (dataset.empty()) throw InvalidArgument("Evaluate: empty dataset");
  CheckModel(model, arch);
  size_t correct = 0;
  double loss = 0.0;
  for (const Example& ex : dataset.examples) {
    CheckExample(arch, ex);
    const Trace t = Forward(model, arch, ex.features, &ex.label);
    const std::vector<double>& p = t.acts.back();
    const size_t pred =
        static_cast<size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    if (pred == ex.label) ++correct;
    loss += t.loss;
  }
  const double n = static_cast<double>(dataset.size());
  return {static_cast<double>(correct) / n, loss / n};
}

}  // namespace flg
