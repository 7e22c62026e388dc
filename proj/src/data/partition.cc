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

#include "flg/data/partition.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "flg/common/error.h"

namespace flg {
namespace {

std::vector<Dataset> EmptyShards(const Dataset& dataset, size_t n) {
  std::vector<Dataset> shards(n);
  for (Dataset& s : shards) s.num_classes = dataset.num_classes;
  return shards;
}

// Deals `indices` round-robin-by-block: shard k gets a contiguous run, sizes
// differing by at most one.
void SplitEvenly(const Dataset& dataset, const std::vector<size_t>& indices,
                 std::span<Dataset*> shards) {
  const size_t n = shards.size();
  const size_t base = indices.size() / n;
  const size_t extra = indices.size() % n;
  size_t pos = 0;
  for (size_t k = 0; k < n; ++k) {
    const size_t take = base + (k < extra ? 1 : 0);
    for (size_t j = 0; j < take; ++j) {
      shards[k]->examples.push_back(dataset.examples[indices[pos++]]);
    }
  }
}

std::vector<Dataset> PartitionIid(const Dataset& dataset, size_t n,
                                  RngStream& rng) {
  std::vector<size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  rng.Shuffle(idx);
  std::vector<Dataset> shards = EmptyShards(dataset, n);
  std::vector<Dataset*> ptrs;
  for (Dataset& s : shards) ptrs.push_back(&s);
  SplitEvenly(dataset, idx, ptrs);
  return shards;
}

std::vector<Dataset> PartitionTwoClass(const Dataset& dataset, size_t n,
                                       RngStream& rng) {
  const size_t num_classes = dataset.num_classes;
  std::vector<std::vector<size_t>> by_class(num_classes);
  for (size_t i = 0; i < dataset.size(); ++i) {
    by_class[dataset.examples[i].label].push_back(i);
  }
  std::vector<size_t> present;
  for (size_t c = 0; c < num_classes; ++c) {
    if (!by_class[c].empty()) present.push_back(c);
  }
  const size_t total_parts = 2 * n;
  if (present.size() > total_parts) {
    throw InvalidArgument(
        "two_class_noniid: " + std::to_string(present.size()) +
        " classes cannot be covered by 2 x " + std::to_string(n) +
        " class-pure partitions");
  }
  // Partitions per class: one each, the rest by largest remainder on size.
  std::vector<size_t> parts(num_classes, 0);
  for (size_t c : present) parts[c] = 1;
  size_t remaining = total_parts - present.size();
  const double total = static_cast<double>(dataset.size());
  std::vector<std::pair<double, size_t>> want;
  for (size_t c : present) {
    want.push_back({static_cast<double>(by_class[c].size()) / total *
                        static_cast<double>(total_parts),
                    c});
  }
  while (remaining > 0) {
    // Give the next partition to the class with the largest deficit; ties go
    // to the lower class index.
    size_t best = present.front();
    double best_gap = -1e300;
    for (const auto& [w, c] : want) {
      const double gap = w - static_cast<double>(parts[c]);
      if (gap > best_gap && parts[c] < by_class[c].size()) {
        best_gap = gap;
        best = c;
      }
    }
    ++parts[best];
    --remaining;
  }

  struct Part {
    size_t cls;
    std::vector<size_t> indices;
  };
  std::vector<Part> all;
  for (size_t c : present) {
    const std::vector<size_t>& ids = by_class[c];
    const size_t k = parts[c];
    const size_t base = ids.size() / k;
    const size_t extra = ids.size() % k;
    size_t pos = 0;
    for (size_t j = 0; j < k; ++j) {
      const size_t take = base + (j < extra ? 1 : 0);
      all.push_back({c, {ids.begin() + pos, ids.begin() + pos + take}});
      pos += take;
    }
  }
  rng.Shuffle(all);

  std::vector<Dataset> shards = EmptyShards(dataset, n);
  std::vector<bool> used(all.size(), false);
  size_t cursor = 0;
  for (size_t k = 0; k < n; ++k) {
    while (used[cursor]) ++cursor;
    used[cursor] = true;
    const Part& first = all[cursor];
    size_t second = all.size();
    for (size_t j = cursor + 1; j < all.size(); ++j) {
      if (!used[j] && all[j].cls != first.cls) {
        second = j;
        break;
      }
    }
    if (second == all.size()) {
      for (size_t j = cursor + 1; j < all.size(); ++j) {
        if (!used[j]) {
          second = j;
          break;
        }
      }
    }
    used[second] = true;
    for (const Part* p : {&first, static_cast<const Part*>(&all[second])}) {
      for (size_t i : p->indices) shards[k].examples.push_back(dataset.examples[i]);
    }
  }
  return shards;
}

std::vector<Dataset> PartitionByProperty(const Dataset& dataset, size_t n,
                                         const PartitionScheme& scheme,
                                         RngStream& rng) {
  if (scheme.property_clients.empty()) {
    throw InvalidArgument("by_property: property_clients must be non-empty");
  }
  for (size_t c : scheme.property_clients) {
    if (c >= n) throw InvalidArgument("by_property: property client out of range");
  }
  std::vector<size_t> with, without;
  for (size_t i = 0; i < dataset.size(); ++i) {
    (dataset.examples[i].has_property ? with : without).push_back(i);
  }
  rng.Shuffle(with);
  rng.Shuffle(without);
  std::vector<Dataset> shards = EmptyShards(dataset, n);
  std::vector<Dataset*> prop_ptrs, all_ptrs;
  for (size_t c : scheme.property_clients) prop_ptrs.push_back(&shards[c]);
  for (Dataset& s : shards) all_ptrs.push_back(&s);
  SplitEvenly(dataset, with, prop_ptrs);
  SplitEvenly(dataset, without, all_ptrs);
  return shards;
}

}  // namespace

PartitionKind ParsePartitionKind(std::string_view name) {
  if (name == "iid") return PartitionKind::kIid;
  if (name == "two_class_noniid") return PartitionKind::kTwoClassNonIid;
  if (name == "by_property") return PartitionKind::kByProperty;
  throw InvalidArgument("unknown partition kind '" + std::string(name) + "'");
}

std::string_view PartitionKindName(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::kIid:
      return "iid";
    case PartitionKind::kTwoClassNonIid:
      return "two_class_noniid";
    case PartitionKind::kByProperty:
      return "by_property";
  }
  return "iid";
}

std::vector<Dataset> Partition(const Dataset& dataset, size_t n_clients,
                               const PartitionScheme& scheme, RngStream& rng) {
  if (n_clients == 0) throw InvalidArgument("Partition: n_clients must be >= 1");
  if (dataset.size() < n_clients) {
    throw InvalidArgument("Partition: " + std::to_string(dataset.size()) +
                          " examples for " + std::to_string(n_clients) +
                          " clients");
  }
  switch (scheme.kind) {
    case PartitionKind::kIid:
      return PartitionIid(dataset, n_clients, rng);
    case PartitionKind::kTwoClassNonIid:
      return PartitionTwoClass(dataset, n_clients, rng);
    case PartitionKind::kByProperty:
      return PartitionByProperty(dataset, n_clients, scheme, rng);
  }
  throw InvalidArgument("Partition: unknown scheme");
}

}  // namespace flg
