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

#ifndef FLG_HARNESS_CONFIG_H_
#define FLG_HARNESS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "flg/adversary/mia.h"
#include "flg/adversary/propinf.h"
#include "flg/data/partition.h"
#include "flg/fl/client.h"
#include "flg/fl/engine.h"
#include "flg/privacy/cdp.h"

namespace flg {

using Json = nlohmann::ordered_json;

struct DatasetConfig {
  std::string kind = "blobs";  // blobs | grid_images | csv
  size_t num_classes = 4;
  size_t dim = 8;
  size_t per_class = 200;
  double separation = 4.0;
  double noise = 1.0;
  double property_fraction = 0.0;
  double property_shift = 0.0;
  size_t property_dims = 1;
  size_t side = 8;        // grid_images
  std::string path;       // csv
  double test_fraction = 0.2;
};

struct ModelConfig {
  std::vector<size_t> hidden;  // empty: multinomial logistic regression
};

enum class DefenseKind { kNone, kNormBound, kWeakDp, kLdp, kCdp };

DefenseKind ParseDefenseKind(std::string_view name);
std::string_view DefenseKindName(DefenseKind kind);

struct LdpSettings {
  double clip_bound = 1.0;       // S
  double sigma = 0.0;            // noise magnitude as published; used by "absolute"
  double target_epsilon = 0.0;   // used by "calibrated"
  // calibrated: noise multiplier solved so R * E * ceil(1/p) steps spend
  //             exactly target_epsilon;
  // multiplier: noise stddev noise_multiplier * S;
  // absolute:   noise stddev sigma, not accountable.
  std::string noise_mode = "calibrated";
  double noise_multiplier = 1.0;
  double sampling_prob = 0.1;
  uint32_t epochs = 1;
  double lr = 0.1;
  bool attackers_opt_out = false;  // attackers skip DP-SGD and keep their boost
};

struct CdpSettings {
  double clip_bound = 1.0;         // S
  double noise_scale = 1.0;        // z
  double target_epsilon = 0.0;     // published budget
  double budget_threshold = 1e9;   // guard stops the run once spent
  SigmaMode sigma_mode = SigmaMode::kPerClientZsOverC;
};

struct DefenseConfig {
  DefenseKind kind = DefenseKind::kNone;
  double server_lr = 1.0;
  double norm_threshold = 5.0;
  double weak_dp_sigma = 0.025;
  double delta = 1e-5;
  LdpSettings ldp;
  CdpSettings cdp;
};

struct AttackersConfig {
  size_t count = 0;
  double fraction = 0.0;          // used when count == 0
  bool force_each_round = true;   // every round selects K - a honest + a attackers

  size_t Resolve(size_t num_clients) const;
};

struct BackdoorConfig {
  std::string kind = "single_pixel";  // single_pixel | semantic
  std::optional<size_t> pixel_index;  // default: last feature
  double trigger_value = 5.0;
  size_t target_label = 0;
  double poison_fraction = 0.5;
  // Semantic: examples with feature[semantic_feature] > semantic_threshold.
  size_t semantic_feature = 0;
  double semantic_threshold = 0.0;
  std::string boost_mode = "replacement";
  LocalTrainingConfig training{5, 10, 0.1};
};

struct MiaSettings {
  MiaConfig mia;
  size_t num_points = 50;  // members, and as many non-members
};

struct PropinfSettings {
  PropinfConfig propinf;
  size_t attacker_client = 0;
  size_t target_client = 1;
  double property_fraction = 1.0;     // share of property-pool examples carrying it
  double target_property_prob = 0.5;  // chance a round's target batch is drawn from it
  size_t aux_size = 200;
};

enum class AttackKind { kNone, kBackdoor, kMia, kPropinf };

AttackKind ParseAttackKind(std::string_view name);
std::string_view AttackKindName(AttackKind kind);

struct AttackConfig {
  AttackKind kind = AttackKind::kNone;
  BackdoorConfig backdoor;
  MiaSettings mia;
  PropinfSettings propinf;
};

struct DeskScale {
  size_t num_clients = 0;
  size_t k = 0;
  size_t rounds = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  size_t num_clients = 10;
  SelectionSpec selection{SelectionSpec::Mode::kFixedK, 10, 1.0};
  size_t rounds = 10;
  size_t repetitions = 1;
  uint64_t master_seed = 1;
  std::string output_dir = "out";
  DatasetConfig dataset;
  PartitionScheme partition;
  ModelConfig model;
  LocalTrainingConfig client{1, 10, 0.1};
  DefenseConfig defense;
  AttackersConfig attackers;
  AttackConfig attack;
  Json published = Json::object();  // reference hyperparameters, echoed verbatim
  std::optional<DeskScale> desk_scale;
  bool desk_scale_applied = false;
  double num_clients_factor = 1.0;
  double rounds_factor = 1.0;
};

// Parses and validates. Unknown keys and type errors raise ConfigError with
// the dotted key path.
ExperimentConfig ConfigFromJson(const Json& json);
// Reads `path`; ConfigError on I/O or JSON syntax problems.
ExperimentConfig LoadConfig(const std::string& path);
Json ConfigToJson(const ExperimentConfig& cfg);
void ValidateConfig(const ExperimentConfig& cfg);

// Replaces N, K and R by the desk-scale values and records the factors.
// No-op when the config has no desk_scale block.
ExperimentConfig ApplyDeskScale(const ExperimentConfig& cfg);

// Dotted keys accepted by sweeps (leaf paths of the JSON form plus a few
// aliases such as attacker_fraction).
std::vector<std::string> SweepableKeys(const ExperimentConfig& cfg);
// Returns a copy with `key` set to the literal `value` (parsed as JSON, or
// taken as a string). ConfigError for unknown keys.
ExperimentConfig WithOverride(const ExperimentConfig& cfg, const std::string& key,
                              const std::string& value);

}  // namespace flg

#endif  // FLG_HARNESS_CONFIG_H_
