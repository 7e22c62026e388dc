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

#ifndef FLG_DATA_SYNTHETIC_H_
#define FLG_DATA_SYNTHETIC_H_

#include <span>

#include "flg/common/rng.h"
#include "flg/data/example.h"

namespace flg {

// Gaussian blobs. The first `dim - property_dims` coordinates carry the class
// signal; class c is centred on +/- (separation / sqrt 2) along axis c, so
// distinct classes sit `separation` apart. The last `property_dims`
// coordinates carry the property: examples with the property have their mean
// shifted by `property_shift` there. The property flag is drawn independently
// of the label.
struct BlobsSpec {
  size_t num_classes = 2;
  size_t dim = 8;
  size_t per_class = 100;
  double property_fraction = 0.0;
  double separation = 4.0;
  double property_shift = 0.0;
  size_t property_dims = 1;
  double noise = 1.0;
};

Dataset GenBlobs(const BlobsSpec& spec, RngStream& rng);

// Shorthand with property_shift = separation.
Dataset GenBlobs(size_t num_classes, size_t dim, size_t per_class,
                 double property_fraction, double separation, RngStream& rng);

// side x side "images" in [0, 1]: a per-class random template plus clamped
// Gaussian noise. The bottom-right pixel of every template is 0, so a
// single-pixel trigger there is out of distribution.
struct GridSpec {
  size_t num_classes = 4;
  size_t side = 8;
  size_t per_class = 100;
  double noise = 0.1;
};

Dataset GenGridImages(const GridSpec& spec, RngStream& rng);

// Concatenates shards in order; all must agree on num_classes.
Dataset Concat(std::span<const Dataset> parts);

}  // namespace flg

#endif  // FLG_DATA_SYNTHETIC_H_
