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

#ifndef FLG_TENSOR_MODEL_H_
#define FLG_TENSOR_MODEL_H_

#include <span>
#include <vector>

#include "flg/common/rng.h"
#include "flg/data/example.h"
#include "flg/tensor/param_vector.h"

namespace flg {

enum class Activation { kRelu };
enum class LossKind { kSoftmaxCrossEntropy };

// Fully connected network: ReLU between layers, softmax cross-entropy on the
// output. Two widths give multinomial logistic regression.
struct ModelArch {
  std::vector<size_t> layer_widths;
  Activation activation = Activation::kRelu;
  LossKind loss = LossKind::kSoftmaxCrossEntropy;

  static ModelArch Logistic(size_t inputs, size_t classes) {
    return ModelArch{{inputs, classes}};
  }

  // Throws InvalidArgument unless there are >= 2 positive widths and >= 2
  // output classes.
  void Validate() const;

  size_t input_width() const { return layer_widths.front(); }
  size_t num_classes() const { return layer_widths.back(); }
  size_t num_layers() const { return layer_widths.size() - 1; }
  std::vector<LayerShape> Shapes() const;
  size_t ParamCount() const;

  friend bool operator==(const ModelArch&, const ModelArch&) = default;
};

using Batch = std::span<const Example>;

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero.
ParamVector InitModel(const ModelArch& arch, RngStream& rng);

struct LossAndGradient {
  double loss = 0.0;
  ParamVector grad;
};

// Mean cross-entropy over the batch and its gradient. Examples are reduced in
// index order. Throws DivergenceError on non-finite activations or loss.
LossAndGradient LossAndGrad(const ParamVector& model, const ModelArch& arch,
                            Batch batch);

// One gradient per example, in batch order.
std::vector<ParamVector> PerExampleGrads(const ParamVector& model,
                                         const ModelArch& arch, Batch batch);

// Loss and gradient for a single example.
LossAndGradient ExampleLossAndGrad(const ParamVector& model,
                                   const ModelArch& arch, const Example& ex);

// Class probabilities for one input.
std::vector<double> Predict(const ParamVector& model, const ModelArch& arch,
                            std::span<const double> features);
size_t PredictLabel(const ParamVector& model, const ModelArch& arch,
                    std::span<const double> features);

// model - lr * grad.
ParamVector SgdStep(const ParamVector& model, const ParamVector& grad,
                    double lr);

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

EvalResult Evaluate(const ParamVector& model, const ModelArch& arch,
                    const Dataset& dataset);

}  // namespace flg

#endif  // FLG_TENSOR_MODEL_H_
