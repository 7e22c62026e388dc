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

#include "flg/data/csv.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <vector>

#include "flg/common/error.h"

namespace flg {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool ParseDouble(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseIndex(std::string_view s, size_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset LoadCsv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header row");
  std::string_view header_line = line;
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  const std::vector<std::string_view> header = SplitFields(header_line);
  std::vector<std::string> names(header.begin(), header.end());

  size_t label_col = names.size();
  size_t prop_col = names.size();
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == schema.label_column) label_col = i;
    if (schema.property_column && names[i] == *schema.property_column) prop_col = i;
  }
  if (label_col == names.size()) {
    throw ParseError(1, "missing column '" + schema.label_column + "'");
  }

  Dataset ds;
  size_t max_label = 0;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::vector<std::string_view> fields = SplitFields(line);
    if (fields.size() != names.size()) {
      throw ParseError(line_no, "expected " + std::to_string(names.size()) +
                                    " fields, found " +
                                    std::to_string(fields.size()));
    }
    Example ex;
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i == label_col) {
        if (!ParseIndex(fields[i], ex.label)) {
          throw ParseError(line_no, "unknown label '" + std::string(fields[i]) +
                                        "' (expected a class index)");
        }
        if (schema.num_classes != 0 && ex.label >= schema.num_classes) {
          throw ParseError(line_no, "unknown label " + std::to_string(ex.label) +
                                        " (num_classes = " +
                                        std::to_string(schema.num_classes) + ")");
        }
      } else if (i == prop_col) {
        if (fields[i] == "1") {
          ex.has_property = true;
        } else if (fields[i] != "0") {
          throw ParseError(line_no, "property must be 0 or 1, found '" +
                                        std::string(fields[i]) + "'");
        }
      } else {
        double v;
        if (!ParseDouble(fields[i], v)) {
          throw ParseError(line_no, "non-numeric value '" + std::string(fields[i]) +
                                        "' in column '" + names[i] + "'");
        }
        ex.features.push_back(v);
      }
    }
    max_label = std::max(max_label, ex.label);
    ds.examples.push_back(std::move(ex));
  }
  ds.num_classes = schema.num_classes != 0 ? schema.num_classes
                   : ds.empty()            ? 0
                                           : max_label + 1;
  return ds;
}

void WriteCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot write '" + path + "'");
  const size_t width = dataset.feature_width();
  for (size_t i = 0; i < width; ++i) out << 'f' << i << ',';
  out << "label,property\n";
  char buf[32];
  for (const Example& ex : dataset.examples) {
    for (double v : ex.features) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out.write(buf, ptr - buf);
      out << ',';
    }
    out << ex.label << ',' << (ex.has_property ? 1 : 0) << '\n';
  }
}

}  // namespace flg
