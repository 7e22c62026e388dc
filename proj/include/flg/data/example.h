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

#ifndef FLG_DATA_EXAMPLE_H_
#define FLG_DATA_EXAMPLE_H_

#include <cstddef>
#include <vector>

namespace flg {

struct Example {
  std::vector<double> features;
  size_t label = 0;
  bool has_property = false;
  bool is_backdoored = false;

  friend bool operator==(const Example&, const Example&) = default;
};

// A dataset is an ordered list of examples sharing one feature width.
struct Dataset {
  std::vector<Example> examples;
  size_t num_classes = 0;

  size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  size_t feature_width() const {
    return examples.empty() ? 0 : examples.front().features.size();
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace flg

#endif  // FLG_DATA_EXAMPLE_H_
