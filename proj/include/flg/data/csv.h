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

#ifndef FLG_DATA_CSV_H_
#define FLG_DATA_CSV_H_

#include <optional>
#include <string>

#include "flg/data/example.h"

namespace flg {

// CSV layout: a header row is required. `label_column` holds a non-negative
// integer class. `property_column`, when present in the file, holds 0 or 1.
// Every other column is a numeric feature, in file order.
struct CsvSchema {
  std::string label_column = "label";
  std::optional<std::string> property_column = "property";
  // 0 infers max(label) + 1; otherwise labels >= num_classes are rejected.
  size_t num_classes = 0;
};

// Throws ParseError (with 1-based line numbers for row-level faults) on a
// missing label column, a non-numeric feature, a ragged row, or an unknown
// label. Rows keep file order.
Dataset LoadCsv(const std::string& path, const CsvSchema& schema = {});

// Writes f0..f{d-1},label,property with round-trip precision.
void WriteCsv(const Dataset& dataset, const std::string& path);

}  // namespace flg

#endif  // FLG_DATA_CSV_H_
