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

#ifndef FLG_PRIVACY_MECHANISMS_H_
#define FLG_PRIVACY_MECHANISMS_H_

#include "flg/common/rng.h"
#include "flg/tensor/param_vector.h"

namespace flg {

// v * min(1, bound / ||v||_2). The zero vector maps to itself.
ParamVector ClipToNorm(const ParamVector& v, double bound);

// In-place variant; returns the norm before clipping.
double ClipInPlace(ParamVector& v, double bound);

// Vector shaped like `like` with iid N(0, stddev^2) entries. stddev == 0
// yields exact zeros without consuming randomness.
ParamVector GaussianNoise(const ParamVector& like, double stddev, RngStream& rng);

// v += N(0, stddev^2 I).
void AddGaussianNoise(ParamVector& v, double stddev, RngStream& rng);

// Classical (epsilon, delta) calibration of the Gaussian mechanism,
// epsilon = sensitivity * sqrt(2 ln(1.25 / delta)) / stddev. Returns +inf for
// stddev == 0.
double GaussianMechanismEpsilon(double sensitivity, double stddev, double delta);

}  // namespace flg

#endif  // FLG_PRIVACY_MECHANISMS_H_
