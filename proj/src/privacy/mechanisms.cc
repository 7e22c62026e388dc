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

#include "flg/privacy/mechanisms.h"

#include <cmath>
#include <limits>

#include "flg/common/error.h"

namespace flg {

double ClipInPlace(ParamVector& v, double bound) {
  if (!(bound > 0.0)) throw InvalidArgument("clip bound must be positive");
  const double norm = v.L2Norm();
  if (norm > bound) v *= bound / norm;
  return norm;
}

ParamVector ClipToNorm(const ParamVector& v, double bound) {
  ParamVector out = v;
  ClipInPlace(out, bound);
  return out;
}

void AddGaussianNoise(ParamVector& v, double stddev, RngStream& rng) {
  if (!(stddev >= 0.0)) throw InvalidArgument("noise stddev must be >= 0");
  if (stddev == 0.0) return;
  for (double& x : v.values()) x += stddev * rng.Normal();
}

ParamVector GaussianNoise(const ParamVector& like, double stddev,
                          RngStream& rng) {
  ParamVector out = like.ZerosLike();
  AddGaussianNoise(out, stddev, rng);
  return out;
}

double GaussianMechanismEpsilon(double sensitivity, double stddev,
                                double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0, 1)");
  if (!(sensitivity >= 0.0)) throw InvalidArgument("sensitivity must be >= 0");
  if (stddev == 0.0) return std::numeric_limits<double>::infinity();
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / stddev;
}

}  // namespace flg
