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
#include <set>
#include <sstream>

#include "flg/common/error.h"
#include "flg/harness/config.h"
#include "flg/harness/experiment.h"
#include "flg/harness/output.h"
#include "flg/harness/presets.h"

namespace flg {
namespace {

ExperimentConfig Small(const std::string& preset) {
  ExperimentConfig cfg = PresetConfig(preset);
  cfg = WithOverride(cfg, "selection.k", "4");
  cfg = WithOverride(cfg, "num_clients", "8");
  cfg = WithOverride(cfg, "rounds", "3");
  cfg = WithOverride(cfg, "repetitions", "2");
  cfg = WithOverride(cfg, "dataset.per_class", "40");
  return cfg;
}

std::string ErrorPath(const Json& j) {
  try {
    ConfigFromJson(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Config, UnknownKeyNamesItsPath) {
  Json j = ConfigToJson(PresetConfig("emnist_ldp_eps3"));
  j["defense"]["ldp"]["epslon"] = 3.0;
  EXPECT_EQ(ErrorPath(j), "defense.ldp.epslon");
  try {
    ConfigFromJson(j);
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown key 'epslon'"), std::string::npos);
  }
}

TEST(Config, TypeErrorsNameTheirPath) {
  Json j = ConfigToJson(PresetConfig("emnist_like_setting1"));
  j["rounds"] = "many";
  EXPECT_EQ(ErrorPath(j), "rounds");
  j = ConfigToJson(PresetConfig("emnist_like_setting1"));
  j["client"]["lr"] = true;
  EXPECT_EQ(ErrorPath(j), "client.lr");
  j = ConfigToJson(PresetConfig("emnist_like_setting1"));
  j["model"]["hidden"] = {8, -1};
  EXPECT_EQ(ErrorPath(j).rfind("model.hidden", 0), 0u);
}

TEST(Config, AttackerCountMustBeBelowClients) {
  Json j = ConfigToJson(PresetConfig("emnist_like_setting1"));
  j["attackers"]["count"] = j["num_clients"];
  EXPECT_EQ(ErrorPath(j), "attackers.count");
}

TEST(Config, SemanticChecks) {
  Json j = ConfigToJson(PresetConfig("emnist_like_setting1"));
  j["selection"]["k"] = 0;
  EXPECT_EQ(ErrorPath(j), "selection.k");
  j = ConfigToJson(PresetConfig("emnist_ldp_eps3"));
  j["defense"]["ldp"]["sampling_prob"] = 0.0;
  EXPECT_EQ(ErrorPath(j), "defense.ldp.sampling_prob");
  j = ConfigToJson(PresetConfig("lfw_like_propinf"));
  j["dataset"]["property_shift"] = 0.0;
  EXPECT_EQ(ErrorPath(j), "dataset.property_shift");
  EXPECT_THROW(LoadConfig("/nonexistent/config.json"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  for (const Preset& p : Presets()) {
    const ExperimentConfig cfg = PresetConfig(p.name);
    EXPECT_EQ(ConfigToJson(ConfigFromJson(ConfigToJson(cfg))), ConfigToJson(cfg)) << p.name;
  }
}

TEST(Presets, ListIncludesEverySetting) {
  std::set<std::string> names;
  for (const Preset& p : Presets()) names.insert(p.name);
  EXPECT_EQ(names.size(), Presets().size());
  for (const char* n : {"emnist_like_setting1", "emnist_like_setting2", "cifar10_like_setting1",
                        "reddit_like_setting1", "cifar100_like_mia", "purchase100_like_mia",
                        "lfw_like_propinf"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  EXPECT_EQ(FindPreset("nope"), nullptr);
  EXPECT_THROW(PresetConfig("nope"), ConfigError);
}

struct PublishedRow {
  const char* preset;
  const char* mechanism;
  double sigma;  // < 0 when not published
  double clip;
  double z;      // < 0 when not published
  double eps;
};

// Hyperparameter tables for the robustness and privacy experiments.
TEST(Presets, PublishedHyperparameters) {
  const PublishedRow rows[] = {
      {"emnist_ldp_eps3", "LDP", 0.8, 5.0, -1, 3.0},
      {"emnist_ldp_eps7_5", "LDP", 0.1, 5.0, -1, 7.5},
      {"emnist_cdp_eps3", "CDP", -1, 3.0, 2.5, 3.0},
      {"emnist_cdp_eps8", "CDP", -1, 5.0, 1.0, 8.0},
      {"cifar10_ldp_eps2_5", "LDP", 0.5, 10.0, -1, 2.5},
      {"cifar10_ldp_eps7", "LDP", 0.01, 10.0, -1, 7.0},
      {"cifar10_cdp_eps2_8", "CDP", -1, 10.0, 1.4, 2.8},
      {"cifar10_cdp_eps6", "CDP", -1, 15.0, 1.0, 6.0},
      {"reddit_ldp_eps1_7", "LDP", 0.025, 5.0, -1, 1.7},
      {"reddit_cdp_eps1_2", "CDP", -1, 10.0, 1.0, 1.2},
      {"cifar100_ldp_eps8_6", "LDP", 0.001, 10.0, -1, 8.6},
      {"cifar100_cdp_eps5_8", "CDP", -1, 15.0, 0.8, 5.8},
      {"purchase100_ldp_eps8_6", "LDP", 0.001, 5.0, -1, 8.6},
      {"purchase100_cdp_eps5_8", "CDP", -1, 15.0, 1.1, 5.8},
      {"lfw_ldp_eps10_7", "LDP", 0.001, 12.0, -1, 10.7},
      {"lfw_cdp_eps4_7", "CDP", -1, 10.0, 1.4, 4.7},
      {"lfw_cdp_eps8_1", "CDP", -1, 10.0, 0.7, 8.1},
  };
  for (const PublishedRow& row : rows) {
    const Preset* p = FindPreset(row.preset);
    ASSERT_NE(p, nullptr) << row.preset;
    const Json& pub = p->json.at("published");
    EXPECT_EQ(pub.at("mechanism"), row.mechanism) << row.preset;
    EXPECT_EQ(pub.at("S").get<double>(), row.clip) << row.preset;
    EXPECT_EQ(pub.at("epsilon").get<double>(), row.eps) << row.preset;
    if (row.sigma >= 0) {
      EXPECT_EQ(pub.at("sigma").get<double>(), row.sigma) << row.preset;
    }
    if (row.z >= 0) {
      EXPECT_EQ(pub.at("z").get<double>(), row.z) << row.preset;
      const ExperimentConfig cfg = PresetConfig(row.preset);
      EXPECT_EQ(cfg.defense.cdp.noise_scale, row.z) << row.preset;
      EXPECT_EQ(cfg.defense.cdp.clip_bound, row.clip) << row.preset;
    } else {
      EXPECT_EQ(PresetConfig(row.preset).defense.ldp.target_epsilon, row.eps) << row.preset;
    }
  }
}

TEST(Presets, RobustnessDefenses) {
  EXPECT_EQ(PresetConfig("emnist_norm_bound_3").defense.norm_threshold, 3.0);
  const ExperimentConfig wdp = PresetConfig("emnist_weak_dp");
  EXPECT_EQ(wdp.defense.kind, DefenseKind::kWeakDp);
  EXPECT_EQ(wdp.defense.norm_threshold, 5.0);
  EXPECT_EQ(wdp.defense.weak_dp_sigma, 0.025);
  EXPECT_EQ(PresetConfig("cifar10_weak_dp").defense.weak_dp_sigma, 0.012);
  EXPECT_EQ(PresetConfig("reddit_weak_dp").defense.weak_dp_sigma, 0.015);
  const ExperimentConfig s1 = PresetConfig("emnist_like_setting1");
  EXPECT_EQ(s1.num_clients, 2400u);
  EXPECT_EQ(s1.selection.k, 30u);
  EXPECT_EQ(s1.rounds, 300u);
}

TEST(DeskScale, ShrinksAndRecordsFactors) {
  const ExperimentConfig cfg = ApplyDeskScale(PresetConfig("emnist_like_setting1"));
  EXPECT_EQ(cfg.num_clients, 48u);
  EXPECT_EQ(cfg.selection.k, 6u);
  EXPECT_EQ(cfg.rounds, 60u);
  EXPECT_DOUBLE_EQ(cfg.num_clients_factor, 50.0);
  EXPECT_DOUBLE_EQ(cfg.rounds_factor, 5.0);
  EXPECT_TRUE(cfg.desk_scale_applied);
  EXPECT_EQ(ApplyDeskScale(cfg).num_clients, 48u);
  const Json echo = ConfigToJson(cfg);
  EXPECT_EQ(echo.at("published").at("participants"), 2400);
}

TEST(Overrides, AliasesAndErrors) {
  const ExperimentConfig base = PresetConfig("emnist_like_setting2");
  EXPECT_DOUBLE_EQ(WithOverride(base, "attacker_fraction", "0.3").attackers.fraction, 0.3);
  EXPECT_EQ(WithOverride(base, "defense", "norm_bound").defense.kind, DefenseKind::kNormBound);
  const auto keys = SweepableKeys(base);
  EXPECT_NE(std::find(keys.begin(), keys.end(), "attackers.fraction"), keys.end());
  try {
    WithOverride(base, "atacker_fraction", "0.3");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("attacker_fraction"), std::string::npos);
  }
  EXPECT_THROW(WithOverride(base, "rounds", "-1"), ConfigError);
}

TEST(Output, MetricsCsvFormat) {
  const ExperimentArtifacts a = RunExperiment(Small("emnist_like_setting1"));
  const std::string csv = MetricsCsv(a);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "rep,round,main_acc,backdoor_acc,eps_spent,attack_metric,selected_clients");
  size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
    const std::string selected = line.substr(line.rfind(',') + 1);
    EXPECT_EQ(std::count(selected.begin(), selected.end(), ';'), 3) << line;
    // No defense: eps_spent and attack_metric are empty.
    EXPECT_NE(line.find(",,,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 2u * 3u);
  EXPECT_EQ(a.rounds_executed(), 3u);
}

TEST(Output, RunsAreByteIdenticalAndSeedSensitive) {
  const ExperimentConfig cfg = Small("emnist_weak_dp");
  const std::string a = MetricsCsv(RunExperiment(cfg));
  EXPECT_EQ(a, MetricsCsv(RunExperiment(cfg)));
  ExperimentConfig other = cfg;
  other.master_seed += 1;
  EXPECT_NE(a, MetricsCsv(RunExperiment(other)));
}

TEST(Output, ReportHasRequiredKeys) {
  const ExperimentArtifacts a = RunExperiment(Small("emnist_ldp_eps3"));
  const Json r = ReportJson(a);
  for (const char* k : {"config", "rounds_executed", "privacy", "attack_report", "stop_reason"}) {
    EXPECT_TRUE(r.contains(k)) << k;
  }
  for (const char* k : {"eps", "delta", "accountant_mode"}) {
    EXPECT_TRUE(r.at("privacy").contains(k)) << k;
  }
  EXPECT_EQ(r.at("privacy").at("accountant_mode"), a.accountant_mode);
  EXPECT_EQ(r.at("config").at("published").at("sigma"), 0.8);
}

TEST(Output, SummarizeUsesSampleStd) {
  const MeanStd s = Summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(s.n, 4u);
  EXPECT_EQ(Summarize({7.0}).std, 0.0);
}

TEST(Experiment, LdpCalibrationSpendsTheTargetBudget) {
  const ExperimentConfig cfg = Small("emnist_ldp_eps3");
  const double z = ResolveLdpNoiseMultiplier(cfg);
  EXPECT_GT(z, 0.0);
  const ExperimentArtifacts a = RunExperiment(cfg);
  for (const RepetitionResult& rep : a.reps) {
    ASSERT_TRUE(rep.eps.has_value());
    EXPECT_LE(*rep.eps, 3.0 + 1e-9);
    EXPECT_EQ(rep.ldp_noise_multiplier, z);
  }
}

TEST(Experiment, RepetitionStreamsDiffer) {
  EXPECT_NE(RepetitionStream(1, 0).NextU64(), RepetitionStream(1, 1).NextU64());
}

}  // namespace
}  // namespace flg
