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

#include "flg/harness/presets.h"

#include <algorithm>

#include "flg/common/error.h"

namespace flg {
namespace {

// Single-pixel backdoor, one attacker forced into every round of K.
Json BackdoorSetting1(const std::string& name, const std::string& dataset) {
  Json j;
  j["name"] = name;
  j["num_clients"] = 2400;
  j["selection"] = {{"mode", "fixed_k"}, {"k", 30}};
  j["rounds"] = 300;
  j["repetitions"] = 5;
  j["master_seed"] = 20260101;
  j["dataset"] = {{"kind", "blobs"},      {"num_classes", 4},     {"dim", 8},
                  {"per_class", 800},     {"separation", 4.0},    {"noise", 1.0},
                  {"property_fraction", 0.0}, {"property_dims", 1}, {"test_fraction", 0.2}};
  j["partition"] = {{"kind", "iid"}};
  j["model"] = {{"hidden", Json::array()}};
  j["client"] = {{"epochs", 5}, {"batch_size", 20}, {"lr", 0.1}};
  j["defense"] = {{"kind", "none"}, {"server_lr", 1.0}};
  j["attackers"] = {{"count", 1}, {"force_each_round", true}};
  j["attack"] = {{"kind", "backdoor"},
                 {"backdoor",
                  {{"kind", "single_pixel"},
                   {"trigger_value", 6.0},
                   {"target_label", 0},
                   {"poison_fraction", 0.5},
                   {"boost_mode", "replacement"},
                   {"training", {{"epochs", 5}, {"batch_size", 20}, {"lr", 0.1}}}}}};
  j["published"] = {{"dataset", dataset},
                    {"participants", 2400},
                    {"clients_per_round", 30},
                    {"attackers_per_round", 1},
                    {"local_epochs", 5},
                    {"batch_size", 20},
                    {"client_lr", 0.1},
                    {"server_lr", 1},
                    {"rounds", 300},
                    {"runs", 5}};
  j["desk_scale"] = {{"num_clients", 48}, {"k", 6}, {"rounds", 60}};
  return j;
}

// Increasing attacker fraction, every client selected each round.
Json BackdoorSetting2(const std::string& name) {
  Json j = BackdoorSetting1(name, "EMNIST");
  j["num_clients"] = 100;
  j["selection"] = {{"mode", "fixed_k"}, {"k", 100}};
  j["attackers"] = {{"count", 0}, {"fraction", 0.2}, {"force_each_round", false}};
  j["published"] = {{"dataset", "EMNIST"}, {"participants", 100}, {"selection_fraction", 1},
                    {"rounds", 300},       {"runs", 5}};
  j["desk_scale"] = {{"num_clients", 20}, {"k", 20}, {"rounds", 40}};
  return j;
}

// Four clients that overfit small shards; local passive membership attacker.
Json MiaBase(const std::string& name, const std::string& dataset) {
  Json j;
  j["name"] = name;
  j["num_clients"] = 4;
  j["selection"] = {{"mode", "fixed_k"}, {"k", 4}};
  j["rounds"] = 30;
  j["repetitions"] = 3;
  j["master_seed"] = 20260202;
  j["dataset"] = {{"kind", "blobs"},     {"num_classes", 10},  {"dim", 20},
                  {"per_class", 300},    {"separation", 1.5},  {"noise", 1.0},
                  {"property_fraction", 0.0}, {"property_dims", 1}, {"test_fraction", 0.5}};
  j["partition"] = {{"kind", "iid"}};
  j["model"] = {{"hidden", {64}}};
  j["client"] = {{"epochs", 5}, {"batch_size", 10}, {"lr", 0.1}};
  j["defense"] = {{"kind", "none"}, {"server_lr", 1.0}};
  j["attack"] = {{"kind", "mia"},
                 {"mia",
                  {{"role", "local"},
                   {"mode", "passive"},
                   {"ascent_lr", 1.0},
                   {"active_fraction", 0.4},
                   {"num_snapshots", 12},
                   {"attacker_client", 0},
                   {"num_points", 200}}}};
  j["published"] = {{"dataset", dataset}, {"participants", 4}};
  return j;
}

// Five clients; the target's batches sometimes carry a strong property.
Json PropinfBase(const std::string& name) {
  Json j;
  j["name"] = name;
  j["num_clients"] = 5;
  j["selection"] = {{"mode", "fixed_k"}, {"k", 5}};
  j["rounds"] = 300;
  j["repetitions"] = 3;
  j["master_seed"] = 20260303;
  j["dataset"] = {{"kind", "blobs"},     {"num_classes", 2},      {"dim", 8},
                  {"per_class", 1536},   {"separation", 4.0},     {"noise", 1.0},
                  {"property_fraction", 0.0}, {"property_shift", 10.0}, {"property_dims", 1},
                  {"test_fraction", 0.2}};
  j["partition"] = {{"kind", "iid"}};
  j["model"] = {{"hidden", {16}}};
  j["client"] = {{"epochs", 1}, {"batch_size", 512}, {"lr", 0.05}};
  j["defense"] = {{"kind", "none"}, {"server_lr", 1.0}};
  j["attack"] = {{"kind", "propinf"},
                 {"propinf",
                  {{"num_components", 16},
                   {"layer_norms", true},
                   {"batch_size", 512},
                   {"attacker_client", 0},
                   {"target_client", 1},
                   {"property_fraction", 1.0},
                   {"target_property_prob", 0.5},
                   {"aux_size", 2048}}}};
  j["published"] = {{"dataset", "LFW"}, {"participants", 5}};
  return j;
}

Json WithLdp(Json j, const std::string& table, const std::string& dataset, double sigma,
             double clip, double eps) {
  j["defense"] = {{"kind", "ldp"},
                  {"server_lr", 1.0},
                  {"ldp",
                   {{"clip_bound", clip},
                    {"sigma", sigma},
                    {"target_epsilon", eps},
                    {"noise_mode", "calibrated"},
                    {"sampling_prob", 0.1},
                    {"epochs", 1},
                    {"lr", 0.1}}}};
  j["published"]["table"] = table;
  j["published"]["dataset"] = dataset;
  j["published"]["mechanism"] = "LDP";
  j["published"]["sigma"] = sigma;
  j["published"]["S"] = clip;
  j["published"]["epsilon"] = eps;
  return j;
}

Json WithCdp(Json j, const std::string& table, const std::string& dataset, double clip,
             double z, double eps) {
  j["defense"] = {{"kind", "cdp"},
                  {"server_lr", 1.0},
                  {"cdp",
                   {{"clip_bound", clip},
                    {"noise_scale", z},
                    {"target_epsilon", eps},
                    {"budget_threshold", eps},
                    {"sigma_mode", "per_client_zS_over_C"}}}};
  j["published"]["table"] = table;
  j["published"]["dataset"] = dataset;
  j["published"]["mechanism"] = "CDP";
  j["published"]["S"] = clip;
  j["published"]["z"] = z;
  j["published"]["epsilon"] = eps;
  return j;
}

// Clip bound rescaled to desk-scale per-example gradient norms; the published
// value stays in the echo.
Json WithDeskClip(Json j, double clip) {
  j["defense"]["ldp"]["clip_bound"] = clip;
  return j;
}

Json WithNormBound(Json j, double bound, std::optional<double> sigma) {
  j["defense"] = {{"kind", sigma ? "weak_dp" : "norm_bound"},
                  {"server_lr", 1.0},
                  {"norm_threshold", bound}};
  j["published"]["norm_bound"] = bound;
  if (sigma) {
    j["defense"]["weak_dp_sigma"] = *sigma;
    j["published"]["sigma"] = *sigma;
  }
  return j;
}

Json GridDataset() {
  return {{"kind", "grid_images"}, {"num_classes", 4}, {"side", 8},
          {"per_class", 800},      {"noise", 0.1},      {"test_fraction", 0.2}};
}

std::vector<Preset> Build() {
  std::vector<Preset> p;
  auto add = [&](const std::string& name, const std::string& desc, Json j) {
    j["name"] = name;
    p.push_back({name, desc, std::move(j)});
  };

  const Json emnist = BackdoorSetting1("emnist_like_setting1", "EMNIST");
  Json cifar = BackdoorSetting1("cifar10_like_setting1", "CIFAR10");
  cifar["dataset"] = GridDataset();
  cifar["attack"]["backdoor"]["trigger_value"] = 1.0;
  Json reddit = BackdoorSetting1("reddit_like_setting1", "Reddit-comments");
  reddit["attack"]["backdoor"]["kind"] = "semantic";
  reddit["attack"]["backdoor"]["semantic_feature"] = 0;
  reddit["attack"]["backdoor"]["semantic_threshold"] = 3.0;
  reddit["attack"]["backdoor"]["target_label"] = 1;
  reddit["published"]["dataset"] = "Reddit-comments";
  reddit["published"]["participants"] = 51548;

  add("emnist_like_setting1", "Single-pixel backdoor, 1 attacker in each round of 30",
      emnist);
  add("emnist_like_setting2", "Single-pixel backdoor with a growing attacker fraction",
      BackdoorSetting2("emnist_like_setting2"));
  add("cifar10_like_setting1", "Single-pixel backdoor on grid images", cifar);
  add("reddit_like_setting1", "Semantic backdoor, 1 attacker in each round", reddit);

  add("emnist_norm_bound_5", "Norm bounding at 5", WithNormBound(emnist, 5.0, std::nullopt));
  add("emnist_norm_bound_3", "Norm bounding at 3", WithNormBound(emnist, 3.0, std::nullopt));
  add("emnist_weak_dp", "Norm bound 5 plus Gaussian noise 0.025",
      WithNormBound(emnist, 5.0, 0.025));
  add("cifar10_norm_bound_10", "Norm bounding at 10", WithNormBound(cifar, 10.0, std::nullopt));
  add("cifar10_weak_dp", "Norm bound 10 plus Gaussian noise 0.012",
      WithNormBound(cifar, 10.0, 0.012));
  add("reddit_weak_dp", "Norm bound 10 plus Gaussian noise 0.015",
      WithNormBound(reddit, 10.0, 0.015));

  // Robustness experiments.
  add("emnist_ldp_eps3", "EMNIST-like LDP", WithLdp(emnist, "robustness", "EMNIST", 0.8, 5.0, 3.0));
  add("emnist_ldp_eps7_5", "EMNIST-like LDP",
      WithLdp(emnist, "robustness", "EMNIST", 0.1, 5.0, 7.5));
  add("emnist_cdp_eps3", "EMNIST-like CDP", WithCdp(emnist, "robustness", "EMNIST", 3.0, 2.5, 3.0));
  add("emnist_cdp_eps8", "EMNIST-like CDP", WithCdp(emnist, "robustness", "EMNIST", 5.0, 1.0, 8.0));
  add("cifar10_ldp_eps2_5", "CIFAR10-like LDP",
      WithLdp(cifar, "robustness", "CIFAR10", 0.5, 10.0, 2.5));
  add("cifar10_ldp_eps7", "CIFAR10-like LDP",
      WithLdp(cifar, "robustness", "CIFAR10", 0.01, 10.0, 7.0));
  add("cifar10_cdp_eps2_8", "CIFAR10-like CDP",
      WithCdp(cifar, "robustness", "CIFAR10", 10.0, 1.4, 2.8));
  add("cifar10_cdp_eps6", "CIFAR10-like CDP",
      WithCdp(cifar, "robustness", "CIFAR10", 15.0, 1.0, 6.0));
  add("reddit_ldp_eps1_7", "Reddit-like LDP",
      WithLdp(reddit, "robustness", "Reddit-comments", 0.025, 5.0, 1.7));
  add("reddit_cdp_eps1_2", "Reddit-like CDP",
      WithCdp(reddit, "robustness", "Reddit-comments", 10.0, 1.0, 1.2));

  // Privacy experiments.
  const Json cifar100 = MiaBase("cifar100_like_mia", "CIFAR100");
  const Json purchase = MiaBase("purchase100_like_mia", "Purchase100");
  const Json lfw = PropinfBase("lfw_like_propinf");
  add("cifar100_like_mia", "Passive local membership inference, 4 clients", cifar100);
  add("purchase100_like_mia", "Passive local membership inference, 4 clients", purchase);
  add("lfw_like_propinf", "Passive property inference, 5 clients", lfw);
  add("cifar100_ldp_eps8_6", "CIFAR100-like LDP vs membership inference",
      WithDeskClip(WithLdp(cifar100, "privacy", "CIFAR100", 0.001, 10.0, 8.6), 0.5));
  add("cifar100_cdp_eps5_8", "CIFAR100-like CDP vs membership inference",
      WithCdp(cifar100, "privacy", "CIFAR100", 15.0, 0.8, 5.8));
  add("purchase100_ldp_eps8_6", "Purchase100-like LDP vs membership inference",
      WithDeskClip(WithLdp(purchase, "privacy", "Purchase100", 0.001, 5.0, 8.6), 0.5));
  add("purchase100_cdp_eps5_8", "Purchase100-like CDP vs membership inference",
      WithCdp(purchase, "privacy", "Purchase100", 15.0, 1.1, 5.8));
  add("lfw_ldp_eps10_7", "LFW-like LDP vs property inference",
      WithDeskClip(WithLdp(lfw, "privacy", "LFW", 0.001, 12.0, 10.7), 0.02));
  add("lfw_cdp_eps4_7", "LFW-like CDP vs property inference",
      WithCdp(lfw, "privacy", "LFW", 10.0, 1.4, 4.7));
  add("lfw_cdp_eps8_1", "LFW-like CDP vs property inference",
      WithCdp(lfw, "privacy", "LFW", 10.0, 0.7, 8.1));

  std::sort(p.begin(), p.end(), [](const Preset& a, const Preset& b) { return a.name < b.name; });
  return p;
}

}  // namespace

const std::vector<Preset>& Presets() {
  static const std::vector<Preset> presets = Build();
  return presets;
}

const Preset* FindPreset(const std::string& name) {
  for (const Preset& p : Presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

ExperimentConfig PresetConfig(const std::string& name) {
  const Preset* p = FindPreset(name);
  if (!p) throw ConfigError(name, "unknown preset '" + name + "'");
  return ConfigFromJson(p->json);
}

}  // namespace flg
