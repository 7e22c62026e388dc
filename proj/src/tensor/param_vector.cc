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

#include "flg/tensor/param_vector.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "flg/common/error.h"

namespace flg {

ParamVector::ParamVector(std::vector<LayerShape> shapes)
    : shapes_(std::move(shapes)) {
  size_t n = 0;
  for (const LayerShape& s : shapes_) {
    if (s.weight_offset != n) {
      throw InvalidArgument("ParamVector: layer blocks must be contiguous");
    }
    n += s.param_count();
  }
  values_.assign(n, 0.0);
}

ParamVector ParamVector::Flat(std::vector<double> values) {
  ParamVector p;
  p.values_ = std::move(values);
  return p;
}

bool ParamVector::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double ParamVector::SquaredNorm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double ParamVector::L2Norm() const { return std::sqrt(SquaredNorm()); }

double ParamVector::LayerNorm(size_t layer) const {
  if (shapes_.empty() && layer == 0) return L2Norm();
  if (layer >= shapes_.size()) {
    throw InvalidArgument("LayerNorm: layer index out of range");
  }
  const LayerShape& s = shapes_[layer];
  double acc = 0.0;
  for (size_t i = s.weight_offset; i < s.weight_offset + s.param_count(); ++i) {
    acc += values_[i] * values_[i];
  }
  return std::sqrt(acc);
}

void ParamVector::CheckShape(const ParamVector& other, const char* op) const {
  if (!SameShape(other)) {
    throw InvalidArgument(std::string(op) + ": shape mismatch (" +
                          std::to_string(size()) + " vs " +
                          std::to_string(other.size()) + ")");
  }
}

ParamVector& ParamVector::operator+=(const ParamVector& other) {
  CheckShape(other, "operator+=");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ParamVector& ParamVector::operator-=(const ParamVector& other) {
  CheckShape(other, "operator-=");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ParamVector& ParamVector::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ParamVector& ParamVector::AddScaled(const ParamVector& other, double s) {
  CheckShape(other, "AddScaled");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

double MaxAbsDiff(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("MaxAbsDiff: size mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace flg
