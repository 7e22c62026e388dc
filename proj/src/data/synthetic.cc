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

#include "flg/data/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flg/common/error.h"

namespace flg {

Dataset GenBlobs(const BlobsSpec& spec, RngStream& rng) {
  if (spec.dim < 2) throw InvalidArgument("GenBlobs: dim must be >= 2");
  if (spec.num_classes < 2 || spec.per_class == 0) {
    throw InvalidArgument("GenBlobs: need >= 2 classes and per_class > 0");
  }
  if (!(spec.separation > 0.0)) {
    throw InvalidArgument("GenBlobs: separation must be positive");
  }
  if (spec.property_fraction < 0.0 || spec.property_fraction > 1.0) {
    throw InvalidArgument("GenBlobs: property_fraction must be in [0, 1]");
  }
  if (spec.property_dims == 0 || spec.property_dims >= spec.dim) {
    throw InvalidArgument("GenBlobs: property_dims must be in [1, dim)");
  }
  const size_t class_dims = spec.dim - spec.property_dims;
  if (spec.num_classes > 2 * class_dims) {
    throw InvalidArgument("GenBlobs: too many classes for the class subspace");
  }
  const double offset = spec.separation / std::numbers::sqrt2;

  RngStream label_rng = rng.Derive("blobs/property");
  RngStream noise_rng = rng.Derive("blobs/noise");
  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.examples.reserve(spec.num_classes * spec.per_class);
  for (size_t c = 0; c < spec.num_classes; ++c) {
    const size_t axis = c % class_dims;
    const double sign = c < class_dims ? 1.0 : -1.0;
    for (size_t i = 0; i < spec.per_class; ++i) {
      Example ex;
      ex.label = c;
      ex.has_property = label_rng.Uniform() < spec.property_fraction;
      ex.features.resize(spec.dim);
      for (size_t d = 0; d < spec.dim; ++d) {
        ex.features[d] = spec.noise * noise_rng.Normal();
      }
      ex.features[axis] += sign * offset;
      if (ex.has_property) {
        for (size_t d = class_dims; d < spec.dim; ++d) {
          ex.features[d] += spec.property_shift;
        }
      }
      ds.examples.push_back(std::move(ex));
    }
  }
  // Interleave classes so prefixes of the dataset are roughly balanced.
  RngStream order = rng.Derive("blobs/order");
  order.Shuffle(ds.examples);
  return ds;
}

Dataset GenBlobs(size_t num_classes, size_t dim, size_t per_class,
                 double property_fraction, double separation, RngStream& rng) {
  BlobsSpec spec;
  spec.num_classes = num_classes;
  spec.dim = dim;
  spec.per_class = per_class;
  spec.property_fraction = property_fraction;
  spec.separation = separation;
  spec.property_shift = separation;
  return GenBlobs(spec, rng);
}

Dataset GenGridImages(const GridSpec& spec, RngStream& rng) {
  if (spec.side < 4) throw InvalidArgument("GenGridImages: side must be >= 4");
  if (spec.num_classes < 2 || spec.per_class == 0) {
    throw InvalidArgument("GenGridImages: need >= 2 classes and per_class > 0");
  }
  if (spec.noise < 0.0) throw InvalidArgument("GenGridImages: negative noise");
  const size_t width = spec.side * spec.side;
  RngStream tmpl_rng = rng.Derive("grid/template");
  std::vector<std::vector<double>> templates(spec.num_classes);
  for (auto& t : templates) {
    t.resize(width);
    for (double& v : t) v = tmpl_rng.Bernoulli(0.35) ? 0.6 + 0.4 * tmpl_rng.Uniform() : 0.0;
    t[width - 1] = 0.0;
  }
  RngStream noise_rng = rng.Derive("grid/noise");
  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.examples.reserve(spec.num_classes * spec.per_class);
  for (size_t c = 0; c < spec.num_classes; ++c) {
    for (size_t i = 0; i < spec.per_class; ++i) {
      Example ex;
      ex.label = c;
      ex.features = templates[c];
      if (spec.noise > 0.0) {
        for (double& v : ex.features) {
          v = std::clamp(v + spec.noise * noise_rng.Normal(), 0.0, 1.0);
        }
        ex.features[width - 1] = 0.0;
      }
      ds.examples.push_back(std::move(ex));
    }
  }
  RngStream order = rng.Derive("grid/order");
  order.Shuffle(ds.examples);
  return ds;
}

Dataset Concat(std::span<const Dataset> parts) {
  Dataset out;
  for (const Dataset& p : parts) {
    if (out.num_classes == 0) out.num_classes = p.num_classes;
    if (p.num_classes != 0 && p.num_classes != out.num_classes) {
      throw InvalidArgument("Concat: num_classes mismatch");
    }
    out.examples.insert(out.examples.end(), p.examples.begin(),
                        p.examples.end());
  }
  return out;
}

}  // namespace flg
