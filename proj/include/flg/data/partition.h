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

#ifndef FLG_DATA_PARTITION_H_
#define FLG_DATA_PARTITION_H_

#include <string_view>
#include <vector>

#include "flg/common/rng.h"
#include "flg/data/example.h"

namespace flg {

enum class PartitionKind {
  // Random split into shards whose sizes differ by at most one.
  kIid,
  // Data sorted by class and cut into 2 * n_clients class-pure partitions;
  // each client receives two, from two different classes where possible.
  kTwoClassNonIid,
  // Property-holding examples go only to `property_clients`; the remaining
  // examples are split iid over all clients.
  kByProperty,
};

struct PartitionScheme {
  PartitionKind kind = PartitionKind::kIid;
  std::vector<size_t> property_clients = {0};
};

PartitionKind ParsePartitionKind(std::string_view name);
std::string_view PartitionKindName(PartitionKind kind);

// Disjoint cover of `dataset` into `n_clients` shards. Throws InvalidArgument
// when there are fewer examples than clients.
std::vector<Dataset> Partition(const Dataset& dataset, size_t n_clients,
                               const PartitionScheme& scheme, RngStream& rng);

}  // namespace flg

#endif  // FLG_DATA_PARTITION_H_
