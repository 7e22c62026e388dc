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

#ifndef FLG_TENSOR_PARAM_VECTOR_H_
#define FLG_TENSOR_PARAM_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace flg {

// Dense layer block inside a flat parameter vector: a row-major
// `rows x cols` weight matrix at `weight_offset` followed by `rows` biases.
struct LayerShape {
  size_t rows = 0;
  size_t cols = 0;
  size_t weight_offset = 0;

  size_t bias_offset() const { return weight_offset + rows * cols; }
  size_t param_count() const { return rows * cols + rows; }

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

// Flat float64 parameters (or gradients, or updates) with per-layer shape
// metadata. Shapes are compared on every binary operation.
class ParamVector {
 public:
  ParamVector() = default;
  // Zero vector with the given layout.
  explicit ParamVector(std::vector<LayerShape> shapes);
  // Unstructured vector: a single 1 x n "layer" with no bias block semantics.
  static ParamVector Flat(std::vector<double> values);

  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<LayerShape>& shapes() const { return shapes_; }
  double& operator[](size_t i) { return values_[i]; }
  double operator[](size_t i) const { return values_[i]; }

  bool SameShape(const ParamVector& other) const {
    return shapes_ == other.shapes_ && values_.size() == other.values_.size();
  }
  bool AllFinite() const;

  double L2Norm() const;
  double SquaredNorm() const;
  // Euclidean norm of one layer block (weights and biases together).
  double LayerNorm(size_t layer) const;

  ParamVector ZerosLike() const { return ParamVector(shapes_, size()); }

  ParamVector& operator+=(const ParamVector& other);
  ParamVector& operator-=(const ParamVector& other);
  ParamVector& operator*=(double s);
  // this += s * other
  ParamVector& AddScaled(const ParamVector& other, double s);

  friend ParamVector operator+(ParamVector a, const ParamVector& b) {
    return a += b;
  }
  friend ParamVector operator-(ParamVector a, const ParamVector& b) {
    return a -= b;
  }
  friend ParamVector operator*(ParamVector a, double s) { return a *= s; }
  friend ParamVector operator*(double s, ParamVector a) { return a *= s; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  ParamVector(std::vector<LayerShape> shapes, size_t n)
      : values_(n, 0.0), shapes_(std::move(shapes)) {}
  void CheckShape(const ParamVector& other, const char* op) const;

  std::vector<double> values_;
  std::vector<LayerShape> shapes_;
};

double MaxAbsDiff(const ParamVector& a, const ParamVector& b);

}  // namespace flg

#endif  // FLG_TENSOR_PARAM_VECTOR_H_
