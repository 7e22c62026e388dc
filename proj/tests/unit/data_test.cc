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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "flg/common/error.h"
#include "flg/data/csv.h"
#include "flg/data/partition.h"
#include "flg/data/poison.h"
#include "flg/data/synthetic.h"
#include "flg/fl/client.h"
#include "flg/tensor/model.h"

namespace flg {
namespace {

std::filesystem::path TempFile(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("flg_data_test_" + name);
}

void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST(Blobs, ShapeAndBalance) {
  RngStream rng(1);
  const Dataset d = GenBlobs(4, 8, 50, 0.3, 4.0, rng);
  EXPECT_EQ(d.size(), 200u);
  EXPECT_EQ(d.num_classes, 4u);
  EXPECT_EQ(d.feature_width(), 8u);
  std::map<size_t, size_t> counts;
  for (const Example& ex : d.examples) ++counts[ex.label];
  for (const auto& [label, n] : counts) EXPECT_EQ(n, 50u) << label;
}

TEST(Blobs, ZeroPropertyFractionMeansNoProperty) {
  RngStream rng(2);
  const Dataset d = GenBlobs(3, 6, 100, 0.0, 4.0, rng);
  for (const Example& ex : d.examples) EXPECT_FALSE(ex.has_property);
}

TEST(Blobs, RejectsDegenerateSpecs) {
  RngStream rng(3);
  EXPECT_THROW(GenBlobs(2, 1, 10, 0.0, 4.0, rng), InvalidArgument);
  EXPECT_THROW(GenBlobs(1, 4, 10, 0.0, 4.0, rng), InvalidArgument);
  EXPECT_THROW(GenBlobs(2, 4, 10, 1.5, 4.0, rng), InvalidArgument);
}

// Chi-square test of independence between label and property flag. The
// critical value is the 0.99 quantile of chi-square with 3 degrees of
// freedom (scipy.stats.chi2.ppf(0.99, 3)).
TEST(Blobs, PropertyIndependentOfLabel) {
  RngStream rng(20260101);
  const Dataset d = GenBlobs(4, 8, 2500, 0.3, 4.0, rng);
  ASSERT_EQ(d.size(), 10000u);
  double table[4][2] = {};
  for (const Example& ex : d.examples) table[ex.label][ex.has_property ? 1 : 0] += 1.0;
  double row[4] = {};
  double col[2] = {};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) {
      row[r] += table[r][c];
      col[c] += table[r][c];
    }
  }
  double chi2 = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double expected = row[r] * col[c] / 10000.0;
      chi2 += (table[r][c] - expected) * (table[r][c] - expected) / expected;
    }
  }
  EXPECT_LT(chi2, 11.344866730144373);
  EXPECT_NEAR(col[1] / 10000.0, 0.3, 0.02);
}

TEST(Blobs, PropertyShiftsTheDesignatedSubspace) {
  BlobsSpec spec;
  spec.num_classes = 2;
  spec.dim = 6;
  spec.per_class = 2000;
  spec.property_fraction = 0.5;
  spec.property_shift = 10.0;
  spec.property_dims = 2;
  RngStream rng(4);
  const Dataset d = GenBlobs(spec, rng);
  double with = 0.0;
  double without = 0.0;
  size_t nw = 0;
  for (const Example& ex : d.examples) {
    (ex.has_property ? with : without) += ex.features[5];
    nw += ex.has_property ? 1 : 0;
  }
  EXPECT_NEAR(with / nw - without / (d.size() - nw), 10.0, 0.2);
}

// A linear model trained by plain SGD separates well-separated blobs.
TEST(Blobs, WellSeparatedIsLinearlySeparable) {
  RngStream rng(5);
  const Dataset d = GenBlobs(2, 8, 200, 0.0, 10.0, rng);
  const ModelArch arch = ModelArch::Logistic(8, 2);
  RngStream init(6);
  RngStream train(7);
  const ParamVector model = LocalSgd(InitModel(arch, init), arch, d, {5, 20, 0.1}, train);
  EXPECT_GT(Evaluate(model, arch, d).accuracy, 0.95);
}

TEST(GridImages, TemplatesLeaveTriggerPixelDark) {
  GridSpec spec;
  spec.per_class = 30;
  spec.noise = 0.0;
  RngStream rng(8);
  const Dataset d = GenGridImages(spec, rng);
  EXPECT_EQ(d.size(), 120u);
  EXPECT_EQ(d.feature_width(), 64u);
  for (const Example& ex : d.examples) {
    EXPECT_EQ(ex.features.back(), 0.0);
    for (double v : ex.features) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Concat, KeepsOrderAndRejectsMixedClasses) {
  Dataset a{{{{1.0}, 0}}, 2};
  Dataset b{{{{2.0}, 1}}, 2};
  const std::vector<Dataset> parts = {a, b};
  const Dataset c = Concat(parts);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.examples[1].features[0], 2.0);
  Dataset bad{{{{2.0}, 1}}, 3};
  const std::vector<Dataset> mixed = {a, bad};
  EXPECT_THROW(Concat(mixed), InvalidArgument);
}

std::multiset<std::vector<double>> Features(const std::vector<Dataset>& shards) {
  std::multiset<std::vector<double>> out;
  for (const Dataset& s : shards) {
    for (const Example& ex : s.examples) out.insert(ex.features);
  }
  return out;
}

TEST(Partition, IidIsADisjointCoverWithBalancedSizes) {
  RngStream rng(9);
  const Dataset d = GenBlobs(4, 8, 25, 0.0, 4.0, rng);
  RngStream part(10);
  const auto shards = Partition(d, 7, {}, part);
  ASSERT_EQ(shards.size(), 7u);
  size_t lo = d.size();
  size_t hi = 0;
  for (const Dataset& s : shards) {
    lo = std::min(lo, s.size());
    hi = std::max(hi, s.size());
  }
  EXPECT_LE(hi - lo, 1u);
  std::multiset<std::vector<double>> all;
  for (const Example& ex : d.examples) all.insert(ex.features);
  EXPECT_EQ(Features(shards), all);
}

TEST(Partition, TwoClassNonIidGivesAtMostTwoClassesPerClient) {
  RngStream rng(11);
  const Dataset d = GenBlobs(4, 8, 40, 0.0, 4.0, rng);
  RngStream part(12);
  PartitionScheme scheme;
  scheme.kind = PartitionKind::kTwoClassNonIid;
  const auto shards = Partition(d, 4, scheme, part);
  size_t total = 0;
  for (const Dataset& s : shards) {
    std::set<size_t> labels;
    for (const Example& ex : s.examples) labels.insert(ex.label);
    EXPECT_LE(labels.size(), 2u);
    total += s.size();
  }
  EXPECT_EQ(total, d.size());
}

TEST(Partition, ByPropertyRoutesPropertyExamples) {
  RngStream rng(13);
  const Dataset d = GenBlobs(2, 4, 100, 0.2, 4.0, rng);
  RngStream part(14);
  PartitionScheme scheme;
  scheme.kind = PartitionKind::kByProperty;
  scheme.property_clients = {1};
  const auto shards = Partition(d, 3, scheme, part);
  for (size_t c = 0; c < shards.size(); ++c) {
    for (const Example& ex : shards[c].examples) {
      if (ex.has_property) {
        EXPECT_EQ(c, 1u);
      }
    }
  }
  EXPECT_EQ(Features(shards).size(), d.size());
}

TEST(Partition, TooFewExamplesThrows) {
  Dataset d{{{{1.0}, 0}, {{2.0}, 1}}, 2};
  RngStream rng(15);
  EXPECT_THROW(Partition(d, 3, {}, rng), InvalidArgument);
  EXPECT_THROW(ParsePartitionKind("shuffled"), InvalidArgument);
  EXPECT_EQ(PartitionKindName(ParsePartitionKind("two_class_noniid")), "two_class_noniid");
}

TEST(Poison, ApplyTriggerTouchesOnlyTheChosenFraction) {
  RngStream rng(16);
  const Dataset d = GenBlobs(2, 4, 50, 0.0, 4.0, rng);
  TriggerSpec t{3, 5.0, 1, 0.3};
  RngStream prng(17);
  const Dataset p = ApplyTrigger(d, t, prng);
  ASSERT_EQ(p.size(), d.size());
  size_t flagged = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    if (p.examples[i].is_backdoored) {
      ++flagged;
      EXPECT_EQ(p.examples[i].features[3], 5.0);
      EXPECT_EQ(p.examples[i].label, 1u);
    } else {
      EXPECT_EQ(p.examples[i], d.examples[i]);
    }
  }
  EXPECT_EQ(flagged, 30u);
}

TEST(Poison, ZeroFractionIsIdentity) {
  RngStream rng(18);
  const Dataset d = GenBlobs(2, 4, 20, 0.0, 4.0, rng);
  RngStream prng(19);
  EXPECT_EQ(ApplyTrigger(d, {0, 9.0, 0, 0.0}, prng), d);
}

TEST(Poison, TriggeredTestSetExcludesTargetLabel) {
  RngStream rng(20);
  const Dataset d = GenBlobs(3, 4, 20, 0.0, 4.0, rng);
  const Dataset t = TriggeredTestSet(d, {2, 7.0, 0, 1.0});
  // Only the 40 examples of classes 1 and 2 remain, relabeled to the target.
  EXPECT_EQ(t.size(), 40u);
  for (const Example& ex : t.examples) {
    EXPECT_EQ(ex.label, 0u);
    EXPECT_TRUE(ex.is_backdoored);
    EXPECT_EQ(ex.features[2], 7.0);
  }
}

TEST(Poison, SemanticRelabel) {
  RngStream rng(21);
  const Dataset d = GenBlobs(2, 4, 50, 0.5, 4.0, rng);
  const Dataset r =
      SemanticRelabel(d, [](const Example& ex) { return ex.has_property; }, 1);
  for (size_t i = 0; i < d.size(); ++i) {
    if (d.examples[i].has_property) {
      EXPECT_EQ(r.examples[i].label, 1u);
      EXPECT_TRUE(r.examples[i].is_backdoored);
    } else {
      EXPECT_EQ(r.examples[i], d.examples[i]);
    }
  }
  EXPECT_THROW(SemanticRelabel(d, [](const Example&) { return false; }, 1), InvalidArgument);
}

TEST(Csv, RoundTrip) {
  RngStream rng(22);
  const Dataset d = GenBlobs(3, 5, 10, 0.4, 4.0, rng);
  const auto path = TempFile("roundtrip.csv");
  WriteCsv(d, path.string());
  const Dataset back = LoadCsv(path.string());
  ASSERT_EQ(back.size(), d.size());
  EXPECT_EQ(back.num_classes, 3u);
  for (size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.examples[i].features, d.examples[i].features);
    EXPECT_EQ(back.examples[i].label, d.examples[i].label);
    EXPECT_EQ(back.examples[i].has_property, d.examples[i].has_property);
  }
}

TEST(Csv, ColumnsInFileOrderAndOptionalProperty) {
  const auto path = TempFile("order.csv");
  WriteText(path, "b,label,a\n1.5,1,2.5\n-1,0,3\n");
  const Dataset d = LoadCsv(path.string());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.examples[0].features, (std::vector<double>{1.5, 2.5}));
  EXPECT_EQ(d.examples[1].label, 0u);
  EXPECT_FALSE(d.examples[0].has_property);
}

TEST(Csv, ErrorsCarryLineNumbers) {
  const auto path = TempFile("bad.csv");
  WriteText(path, "x,label\n1,0\nfoo,1\n");
  try {
    LoadCsv(path.string());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  WriteText(path, "x,y\n1,0\n");
  EXPECT_THROW(LoadCsv(path.string()), ParseError);
  WriteText(path, "x,label\n1,0,4\n");
  EXPECT_THROW(LoadCsv(path.string()), ParseError);
  WriteText(path, "x,label,property\n1,0,2\n");
  EXPECT_THROW(LoadCsv(path.string()), ParseError);
  CsvSchema schema;
  schema.num_classes = 2;
  WriteText(path, "x,label\n1,5\n");
  EXPECT_THROW(LoadCsv(path.string(), schema), ParseError);
}

}  // namespace
}  // namespace flg
