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

#include "flg/harness/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "flg/common/error.h"

namespace flg {
namespace {

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as typos.
class ObjectReader {
 public:
  ObjectReader(const Json& json, std::string path) : json_(json), path_(std::move(path)) {
    if (!json_.is_object()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  bool Has(const std::string& key) const { return json_.contains(key); }

  const Json* Raw(const std::string& key) {
    seen_.insert(key);
    auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
  }

  double Double(const std::string& key, double def) {
    const Json* v = Raw(key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(Join(path_, key), "expected a number");
    return v->get<double>();
  }

  uint64_t Unsigned(const std::string& key, uint64_t def) {
    const Json* v = Raw(key);
    if (!v) return def;
    if (v->is_number_unsigned()) return v->get<uint64_t>();
    if (v->is_number_integer() && v->get<int64_t>() >= 0) return v->get<uint64_t>();
    if (v->is_number_float()) {
      const double d = v->get<double>();
      if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<uint64_t>(d);
    }
    throw ConfigError(Join(path_, key), "expected a non-negative integer");
  }

  size_t Size(const std::string& key, size_t def) {
    return static_cast<size_t>(Unsigned(key, def));
  }

  bool Bool(const std::string& key, bool def) {
    const Json* v = Raw(key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError(Join(path_, key), "expected true or false");
    return v->get<bool>();
  }

  std::string String(const std::string& key, const std::string& def) {
    const Json* v = Raw(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(Join(path_, key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<size_t> SizeList(const std::string& key, std::vector<size_t> def) {
    const Json* v = Raw(key);
    if (!v) return def;
    if (!v->is_array()) throw ConfigError(Join(path_, key), "expected an array");
    std::vector<size_t> out;
    for (size_t i = 0; i < v->size(); ++i) {
      const Json& e = (*v)[i];
      if (!e.is_number_integer() || e.get<int64_t>() < 0) {
        throw ConfigError(Join(path_, key) + "[" + std::to_string(i) + "]",
                          "expected a non-negative integer");
      }
      out.push_back(e.get<size_t>());
    }
    return out;
  }

  // Child reader over an object, or over an empty object when absent.
  ObjectReader Child(const std::string& key) {
    const Json* v = Raw(key);
    return ObjectReader(v ? *v : Empty(), Join(path_, key));
  }

  std::string path(const std::string& key) const { return Join(path_, key); }

  void Finish() const {
    for (auto it = json_.begin(); it != json_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(Join(path_, it.key()), "unknown key '" + it.key() + "'");
      }
    }
  }

 private:
  static const Json& Empty() {
    static const Json empty = Json::object();
    return empty;
  }

  const Json& json_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs `parse` and turns InvalidArgument into a ConfigError at `path`.
template <typename F>
auto AtPath(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

void ParseDataset(ObjectReader r, DatasetConfig& d) {
  d.kind = r.String("kind", d.kind);
  d.num_classes = r.Size("num_classes", d.num_classes);
  d.dim = r.Size("dim", d.dim);
  d.per_class = r.Size("per_class", d.per_class);
  d.separation = r.Double("separation", d.separation);
  d.noise = r.Double("noise", d.noise);
  d.property_fraction = r.Double("property_fraction", d.property_fraction);
  d.property_shift = r.Double("property_shift", d.property_shift);
  d.property_dims = r.Size("property_dims", d.property_dims);
  d.side = r.Size("side", d.side);
  d.path = r.String("path", d.path);
  d.test_fraction = r.Double("test_fraction", d.test_fraction);
  r.Finish();
}

void ParseTraining(ObjectReader r, LocalTrainingConfig& t) {
  t.epochs = static_cast<uint32_t>(r.Unsigned("epochs", t.epochs));
  t.batch_size = r.Size("batch_size", t.batch_size);
  t.lr = r.Double("lr", t.lr);
  r.Finish();
}

void ParseDefense(ObjectReader r, DefenseConfig& d) {
  d.kind = AtPath(r.path("kind"),
                  [&] { return ParseDefenseKind(r.String("kind", "none")); });
  d.server_lr = r.Double("server_lr", d.server_lr);
  d.norm_threshold = r.Double("norm_threshold", d.norm_threshold);
  d.weak_dp_sigma = r.Double("weak_dp_sigma", d.weak_dp_sigma);
  d.delta = r.Double("delta", d.delta);
  {
    ObjectReader l = r.Child("ldp");
    LdpSettings& s = d.ldp;
    s.clip_bound = l.Double("clip_bound", s.clip_bound);
    s.sigma = l.Double("sigma", s.sigma);
    s.target_epsilon = l.Double("target_epsilon", s.target_epsilon);
    s.noise_mode = l.String("noise_mode", s.noise_mode);
    s.noise_multiplier = l.Double("noise_multiplier", s.noise_multiplier);
    s.sampling_prob = l.Double("sampling_prob", s.sampling_prob);
    s.epochs = static_cast<uint32_t>(l.Unsigned("epochs", s.epochs));
    s.lr = l.Double("lr", s.lr);
    s.attackers_opt_out = l.Bool("attackers_opt_out", s.attackers_opt_out);
    l.Finish();
  }
  {
    ObjectReader c = r.Child("cdp");
    CdpSettings& s = d.cdp;
    s.clip_bound = c.Double("clip_bound", s.clip_bound);
    s.noise_scale = c.Double("noise_scale", s.noise_scale);
    s.target_epsilon = c.Double("target_epsilon", s.target_epsilon);
    s.budget_threshold = c.Double("budget_threshold", s.budget_threshold);
    s.sigma_mode = AtPath(c.path("sigma_mode"), [&] {
      return ParseSigmaMode(c.String("sigma_mode", std::string(SigmaModeName(s.sigma_mode))));
    });
    c.Finish();
  }
  r.Finish();
}

void ParseBackdoor(ObjectReader r, BackdoorConfig& b) {
  b.kind = r.String("kind", b.kind);
  if (r.Has("pixel_index")) b.pixel_index = r.Size("pixel_index", 0);
  b.trigger_value = r.Double("trigger_value", b.trigger_value);
  b.target_label = r.Size("target_label", b.target_label);
  b.poison_fraction = r.Double("poison_fraction", b.poison_fraction);
  b.semantic_feature = r.Size("semantic_feature", b.semantic_feature);
  b.semantic_threshold = r.Double("semantic_threshold", b.semantic_threshold);
  b.boost_mode = r.String("boost_mode", b.boost_mode);
  ParseTraining(r.Child("training"), b.training);
  r.Finish();
}

void ParseMia(ObjectReader r, MiaSettings& m) {
  MiaConfig& c = m.mia;
  c.role = AtPath(r.path("role"), [&] {
    return ParseMiaRole(r.String("role", std::string(MiaRoleName(c.role))));
  });
  c.mode = AtPath(r.path("mode"), [&] {
    return ParseMiaMode(r.String("mode", std::string(MiaModeName(c.mode))));
  });
  c.ascent_lr = r.Double("ascent_lr", c.ascent_lr);
  c.active_fraction = r.Double("active_fraction", c.active_fraction);
  c.num_snapshots = r.Size("num_snapshots", c.num_snapshots);
  c.attacker_client = r.Size("attacker_client", c.attacker_client);
  c.target_client = r.Size("target_client", c.target_client);
  {
    ObjectReader f = r.Child("features");
    c.features.loss = f.Bool("loss", c.features.loss);
    c.features.confidence = f.Bool("confidence", c.features.confidence);
    c.features.grad_norm = f.Bool("grad_norm", c.features.grad_norm);
    c.features.full_gradient = f.Bool("full_gradient", c.features.full_gradient);
    f.Finish();
  }
  m.num_points = r.Size("num_points", m.num_points);
  r.Finish();
}

void ParsePropinf(ObjectReader r, PropinfSettings& p) {
  p.propinf.num_components = r.Size("num_components", p.propinf.num_components);
  p.propinf.layer_norms = r.Bool("layer_norms", p.propinf.layer_norms);
  p.propinf.batch_size = r.Size("batch_size", p.propinf.batch_size);
  p.attacker_client = r.Size("attacker_client", p.attacker_client);
  p.target_client = r.Size("target_client", p.target_client);
  p.property_fraction = r.Double("property_fraction", p.property_fraction);
  p.target_property_prob = r.Double("target_property_prob", p.target_property_prob);
  p.aux_size = r.Size("aux_size", p.aux_size);
  r.Finish();
}

void ParseAttack(ObjectReader r, AttackConfig& a) {
  a.kind = AtPath(r.path("kind"), [&] { return ParseAttackKind(r.String("kind", "none")); });
  const char* families[] = {"backdoor", "mia", "propinf"};
  for (const char* f : families) {
    if (r.Has(f) && std::string(f) != AttackKindName(a.kind)) {
      throw ConfigError(r.path(f), "exactly one attack family per run; attack.kind is '" +
                                       std::string(AttackKindName(a.kind)) + "'");
    }
  }
  if (r.Has("backdoor")) ParseBackdoor(r.Child("backdoor"), a.backdoor);
  if (r.Has("mia")) ParseMia(r.Child("mia"), a.mia);
  if (r.Has("propinf")) ParsePropinf(r.Child("propinf"), a.propinf);
  r.Finish();
}

Json TrainingJson(const LocalTrainingConfig& t) {
  return Json{{"epochs", t.epochs}, {"batch_size", t.batch_size}, {"lr", t.lr}};
}

// Collects dotted paths of scalar leaves.
void Leaves(const Json& j, const std::string& path, std::vector<std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) Leaves(*it, Join(path, it.key()), out);
  } else if (!path.empty()) {
    out.push_back(path);
  }
}

const std::vector<std::pair<std::string, std::string>>& Aliases() {
  static const std::vector<std::pair<std::string, std::string>> aliases = {
      {"attacker_fraction", "attackers.fraction"},
      {"attacker_count", "attackers.count"},
      {"defense", "defense.kind"},
      {"k", "selection.k"},
      {"ldp_epsilon", "defense.ldp.target_epsilon"},
      {"norm_bound", "defense.norm_threshold"},
  };
  return aliases;
}

}  // namespace

DefenseKind ParseDefenseKind(std::string_view name) {
  if (name == "none") return DefenseKind::kNone;
  if (name == "norm_bound") return DefenseKind::kNormBound;
  if (name == "weak_dp") return DefenseKind::kWeakDp;
  if (name == "ldp") return DefenseKind::kLdp;
  if (name == "cdp") return DefenseKind::kCdp;
  throw InvalidArgument("unknown defense '" + std::string(name) +
                        "' (none, norm_bound, weak_dp, ldp, cdp)");
}

std::string_view DefenseKindName(DefenseKind kind) {
  switch (kind) {
    case DefenseKind::kNone:
      return "none";
    case DefenseKind::kNormBound:
      return "norm_bound";
    case DefenseKind::kWeakDp:
      return "weak_dp";
    case DefenseKind::kLdp:
      return "ldp";
    case DefenseKind::kCdp:
      return "cdp";
  }
  return "none";
}

AttackKind ParseAttackKind(std::string_view name) {
  if (name == "none") return AttackKind::kNone;
  if (name == "backdoor") return AttackKind::kBackdoor;
  if (name == "mia") return AttackKind::kMia;
  if (name == "propinf") return AttackKind::kPropinf;
  throw InvalidArgument("unknown attack '" + std::string(name) +
                        "' (none, backdoor, mia, propinf)");
}

std::string_view AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kBackdoor:
      return "backdoor";
    case AttackKind::kMia:
      return "mia";
    case AttackKind::kPropinf:
      return "propinf";
  }
  return "none";
}

size_t AttackersConfig::Resolve(size_t num_clients) const {
  if (count > 0) return count;
  return static_cast<size_t>(std::llround(fraction * static_cast<double>(num_clients)));
}

ExperimentConfig ConfigFromJson(const Json& json) {
  ExperimentConfig cfg;
  ObjectReader r(json, "");
  cfg.name = r.String("name", cfg.name);
  cfg.num_clients = r.Size("num_clients", cfg.num_clients);
  {
    ObjectReader s = r.Child("selection");
    const std::string mode = s.String("mode", "fixed_k");
    if (mode == "fixed_k") {
      cfg.selection.mode = SelectionSpec::Mode::kFixedK;
    } else if (mode == "probability") {
      cfg.selection.mode = SelectionSpec::Mode::kProbability;
    } else {
      throw ConfigError(s.path("mode"), "expected 'fixed_k' or 'probability'");
    }
    cfg.selection.k = s.Size("k", cfg.num_clients);
    cfg.selection.q = s.Double("q", cfg.selection.q);
    s.Finish();
  }
  cfg.rounds = r.Size("rounds", cfg.rounds);
  cfg.repetitions = r.Size("repetitions", cfg.repetitions);
  cfg.master_seed = r.Unsigned("master_seed", cfg.master_seed);
  cfg.output_dir = r.String("output_dir", cfg.output_dir);
  ParseDataset(r.Child("dataset"), cfg.dataset);
  {
    ObjectReader p = r.Child("partition");
    cfg.partition.kind = AtPath(p.path("kind"), [&] {
      return ParsePartitionKind(p.String("kind", "iid"));
    });
    cfg.partition.property_clients =
        p.SizeList("property_clients", cfg.partition.property_clients);
    p.Finish();
  }
  {
    ObjectReader m = r.Child("model");
    cfg.model.hidden = m.SizeList("hidden", cfg.model.hidden);
    const std::string act = m.String("activation", "relu");
    if (act != "relu") throw ConfigError(m.path("activation"), "only 'relu' is supported");
    m.Finish();
  }
  ParseTraining(r.Child("client"), cfg.client);
  ParseDefense(r.Child("defense"), cfg.defense);
  {
    ObjectReader a = r.Child("attackers");
    cfg.attackers.count = a.Size("count", cfg.attackers.count);
    cfg.attackers.fraction = a.Double("fraction", cfg.attackers.fraction);
    cfg.attackers.force_each_round = a.Bool("force_each_round", cfg.attackers.force_each_round);
    a.Finish();
  }
  ParseAttack(r.Child("attack"), cfg.attack);
  if (const Json* p = r.Raw("published")) {
    if (!p->is_object()) throw ConfigError("published", "expected an object");
    cfg.published = *p;
  }
  if (r.Has("desk_scale")) {
    ObjectReader d = r.Child("desk_scale");
    DeskScale ds;
    ds.num_clients = d.Size("num_clients", 0);
    ds.k = d.Size("k", 0);
    ds.rounds = d.Size("rounds", 0);
    d.Finish();
    cfg.desk_scale = ds;
  }
  if (r.Has("scale")) {
    ObjectReader s = r.Child("scale");
    cfg.desk_scale_applied = s.Bool("desk_scale_applied", false);
    cfg.num_clients_factor = s.Double("num_clients_factor", 1.0);
    cfg.rounds_factor = s.Double("rounds_factor", 1.0);
    s.Finish();
  }
  r.Finish();
  ValidateConfig(cfg);
  return cfg;
}

void ValidateConfig(const ExperimentConfig& cfg) {
  auto require = [](bool ok, const std::string& path, const std::string& msg) {
    if (!ok) throw ConfigError(path, msg);
  };
  require(cfg.num_clients >= 1, "num_clients", "must be >= 1");
  require(cfg.rounds >= 1, "rounds", "must be >= 1");
  require(cfg.repetitions >= 1, "repetitions", "must be >= 1");
  if (cfg.selection.mode == SelectionSpec::Mode::kFixedK) {
    require(cfg.selection.k >= 1 && cfg.selection.k <= cfg.num_clients, "selection.k",
            "must be in [1, num_clients]");
  } else {
    require(cfg.selection.q > 0.0 && cfg.selection.q <= 1.0, "selection.q",
            "must be in (0, 1]");
  }

  const DatasetConfig& d = cfg.dataset;
  require(d.kind == "blobs" || d.kind == "grid_images" || d.kind == "csv", "dataset.kind",
          "expected 'blobs', 'grid_images' or 'csv'");
  require(d.test_fraction > 0.0 && d.test_fraction < 1.0, "dataset.test_fraction",
          "must be in (0, 1)");
  if (d.kind == "csv") require(!d.path.empty(), "dataset.path", "required for csv datasets");
  if (d.kind != "csv") {
    require(d.num_classes >= 2, "dataset.num_classes", "must be >= 2");
    require(d.per_class >= 1, "dataset.per_class", "must be >= 1");
  }
  require(d.property_fraction >= 0.0 && d.property_fraction <= 1.0,
          "dataset.property_fraction", "must be in [0, 1]");
  require(cfg.client.epochs >= 1, "client.epochs", "must be >= 1");
  require(cfg.client.batch_size >= 1, "client.batch_size", "must be >= 1");
  require(cfg.client.lr > 0.0, "client.lr", "must be positive");
  for (size_t c : cfg.partition.property_clients) {
    require(c < cfg.num_clients, "partition.property_clients", "client id out of range");
  }

  const DefenseConfig& def = cfg.defense;
  require(def.server_lr > 0.0, "defense.server_lr", "must be positive");
  require(def.delta > 0.0 && def.delta < 1.0, "defense.delta", "must be in (0, 1)");
  if (def.kind == DefenseKind::kNormBound || def.kind == DefenseKind::kWeakDp) {
    require(def.norm_threshold > 0.0, "defense.norm_threshold", "must be positive");
  }
  if (def.kind == DefenseKind::kWeakDp) {
    require(def.weak_dp_sigma >= 0.0, "defense.weak_dp_sigma", "must be >= 0");
  }
  if (def.kind == DefenseKind::kLdp) {
    const LdpSettings& l = def.ldp;
    require(l.clip_bound > 0.0, "defense.ldp.clip_bound", "must be positive");
    require(l.sampling_prob > 0.0 && l.sampling_prob <= 1.0, "defense.ldp.sampling_prob",
            "must be in (0, 1]");
    require(l.epochs >= 1, "defense.ldp.epochs", "must be >= 1");
    require(l.lr > 0.0, "defense.ldp.lr", "must be positive");
    require(l.noise_mode == "calibrated" || l.noise_mode == "multiplier" ||
                l.noise_mode == "absolute",
            "defense.ldp.noise_mode", "expected 'calibrated', 'multiplier' or 'absolute'");
    if (l.noise_mode == "calibrated") {
      require(l.target_epsilon > 0.0, "defense.ldp.target_epsilon",
              "must be positive when noise_mode is 'calibrated'");
    }
    if (l.noise_mode == "multiplier") {
      require(l.noise_multiplier >= 0.0, "defense.ldp.noise_multiplier", "must be >= 0");
    }
    if (l.noise_mode == "absolute") {
      require(l.sigma >= 0.0, "defense.ldp.sigma", "must be >= 0");
    }
  }
  if (def.kind == DefenseKind::kCdp) {
    require(def.cdp.clip_bound > 0.0, "defense.cdp.clip_bound", "must be positive");
    require(def.cdp.noise_scale >= 0.0, "defense.cdp.noise_scale", "must be >= 0");
    require(def.cdp.budget_threshold > 0.0, "defense.cdp.budget_threshold",
            "must be positive");
  }

  const size_t attackers = cfg.attackers.Resolve(cfg.num_clients);
  require(cfg.attackers.fraction >= 0.0 && cfg.attackers.fraction < 1.0, "attackers.fraction",
          "must be in [0, 1)");
  require(attackers < cfg.num_clients, "attackers.count",
          "attacker count " + std::to_string(attackers) + " must be below num_clients " +
              std::to_string(cfg.num_clients));

  const AttackConfig& a = cfg.attack;
  switch (a.kind) {
    case AttackKind::kNone:
      break;
    case AttackKind::kBackdoor: {
      const BackdoorConfig& b = a.backdoor;
      require(attackers >= 1, "attackers.count", "a backdoor run needs at least one attacker");
      require(b.kind == "single_pixel" || b.kind == "semantic", "attack.backdoor.kind",
              "expected 'single_pixel' or 'semantic'");
      require(b.boost_mode == "replacement" || b.boost_mode == "plain_poisoned_training",
              "attack.backdoor.boost_mode",
              "expected 'replacement' or 'plain_poisoned_training'");
      require(b.poison_fraction >= 0.0 && b.poison_fraction <= 1.0,
              "attack.backdoor.poison_fraction", "must be in [0, 1]");
      require(b.training.epochs >= 1 && b.training.batch_size >= 1 && b.training.lr > 0.0,
              "attack.backdoor.training", "epochs, batch_size and lr must be positive");
      if (cfg.attackers.force_each_round && cfg.selection.mode == SelectionSpec::Mode::kFixedK) {
        require(attackers < cfg.selection.k, "attackers.count",
                "forced attackers must leave room for honest clients in K");
      }
      if (d.kind != "csv") {
        require(b.target_label < d.num_classes, "attack.backdoor.target_label",
                "out of range");
      }
      break;
    }
    case AttackKind::kMia: {
      AtPath("attack.mia", [&] {
        a.mia.mia.Validate();
        return 0;
      });
      require(a.mia.num_points >= 2, "attack.mia.num_points", "must be >= 2");
      require(a.mia.mia.attacker_client < cfg.num_clients, "attack.mia.attacker_client",
              "out of range");
      require(a.mia.mia.target_client < cfg.num_clients, "attack.mia.target_client",
              "out of range");
      break;
    }
    case AttackKind::kPropinf: {
      const PropinfSettings& p = a.propinf;
      require(cfg.num_clients >= 2, "num_clients", "property inference needs >= 2 clients");
      require(p.attacker_client < cfg.num_clients && p.target_client < cfg.num_clients &&
                  p.attacker_client != p.target_client,
              "attack.propinf", "attacker and target must be distinct valid clients");
      require(p.property_fraction >= 0.0 && p.property_fraction <= 1.0,
              "attack.propinf.property_fraction", "must be in [0, 1]");
      require(p.target_property_prob > 0.0 && p.target_property_prob < 1.0,
              "attack.propinf.target_property_prob", "must be in (0, 1)");
      require(p.aux_size >= 2, "attack.propinf.aux_size", "must be >= 2");
      require(p.propinf.batch_size >= 1, "attack.propinf.batch_size", "must be >= 1");
      require(d.kind == "blobs", "dataset.kind", "property inference uses blobs datasets");
      require(d.property_shift != 0.0, "dataset.property_shift",
              "property inference needs a non-zero property shift");
      break;
    }
  }
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  Json json;
  try {
    json = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return ConfigFromJson(json);
}

Json ConfigToJson(const ExperimentConfig& cfg) {
  Json j;
  j["name"] = cfg.name;
  j["num_clients"] = cfg.num_clients;
  j["selection"] = {
      {"mode", cfg.selection.mode == SelectionSpec::Mode::kFixedK ? "fixed_k" : "probability"},
      {"k", cfg.selection.k},
      {"q", cfg.selection.q}};
  j["rounds"] = cfg.rounds;
  j["repetitions"] = cfg.repetitions;
  j["master_seed"] = cfg.master_seed;
  j["output_dir"] = cfg.output_dir;
  const DatasetConfig& d = cfg.dataset;
  j["dataset"] = {{"kind", d.kind},
                  {"num_classes", d.num_classes},
                  {"dim", d.dim},
                  {"per_class", d.per_class},
                  {"separation", d.separation},
                  {"noise", d.noise},
                  {"property_fraction", d.property_fraction},
                  {"property_shift", d.property_shift},
                  {"property_dims", d.property_dims},
                  {"side", d.side},
                  {"path", d.path},
                  {"test_fraction", d.test_fraction}};
  j["partition"] = {{"kind", std::string(PartitionKindName(cfg.partition.kind))},
                    {"property_clients", cfg.partition.property_clients}};
  j["model"] = {{"hidden", cfg.model.hidden}, {"activation", "relu"}};
  j["client"] = TrainingJson(cfg.client);
  const DefenseConfig& def = cfg.defense;
  j["defense"] = {
      {"kind", std::string(DefenseKindName(def.kind))},
      {"server_lr", def.server_lr},
      {"norm_threshold", def.norm_threshold},
      {"weak_dp_sigma", def.weak_dp_sigma},
      {"delta", def.delta},
      {"ldp",
       {{"clip_bound", def.ldp.clip_bound},
        {"sigma", def.ldp.sigma},
        {"target_epsilon", def.ldp.target_epsilon},
        {"noise_mode", def.ldp.noise_mode},
        {"noise_multiplier", def.ldp.noise_multiplier},
        {"sampling_prob", def.ldp.sampling_prob},
        {"epochs", def.ldp.epochs},
        {"lr", def.ldp.lr},
        {"attackers_opt_out", def.ldp.attackers_opt_out}}},
      {"cdp",
       {{"clip_bound", def.cdp.clip_bound},
        {"noise_scale", def.cdp.noise_scale},
        {"target_epsilon", def.cdp.target_epsilon},
        {"budget_threshold", def.cdp.budget_threshold},
        {"sigma_mode", std::string(SigmaModeName(def.cdp.sigma_mode))}}}};
  j["attackers"] = {{"count", cfg.attackers.count},
                    {"fraction", cfg.attackers.fraction},
                    {"force_each_round", cfg.attackers.force_each_round}};
  Json attack = {{"kind", std::string(AttackKindName(cfg.attack.kind))}};
  switch (cfg.attack.kind) {
    case AttackKind::kNone:
      break;
    case AttackKind::kBackdoor: {
      const BackdoorConfig& b = cfg.attack.backdoor;
      Json bj = {{"kind", b.kind}};
      if (b.pixel_index) bj["pixel_index"] = *b.pixel_index;
      bj["trigger_value"] = b.trigger_value;
      bj["target_label"] = b.target_label;
      bj["poison_fraction"] = b.poison_fraction;
      bj["semantic_feature"] = b.semantic_feature;
      bj["semantic_threshold"] = b.semantic_threshold;
      bj["boost_mode"] = b.boost_mode;
      bj["training"] = TrainingJson(b.training);
      attack["backdoor"] = bj;
      break;
    }
    case AttackKind::kMia: {
      const MiaConfig& m = cfg.attack.mia.mia;
      attack["mia"] = {{"role", std::string(MiaRoleName(m.role))},
                       {"mode", std::string(MiaModeName(m.mode))},
                       {"ascent_lr", m.ascent_lr},
                       {"active_fraction", m.active_fraction},
                       {"num_snapshots", m.num_snapshots},
                       {"attacker_client", m.attacker_client},
                       {"target_client", m.target_client},
                       {"features",
                        {{"loss", m.features.loss},
                         {"confidence", m.features.confidence},
                         {"grad_norm", m.features.grad_norm},
                         {"full_gradient", m.features.full_gradient}}},
                       {"num_points", cfg.attack.mia.num_points}};
      break;
    }
    case AttackKind::kPropinf: {
      const PropinfSettings& p = cfg.attack.propinf;
      attack["propinf"] = {{"num_components", p.propinf.num_components},
                           {"layer_norms", p.propinf.layer_norms},
                           {"batch_size", p.propinf.batch_size},
                           {"attacker_client", p.attacker_client},
                           {"target_client", p.target_client},
                           {"property_fraction", p.property_fraction},
                           {"target_property_prob", p.target_property_prob},
                           {"aux_size", p.aux_size}};
      break;
    }
  }
  j["attack"] = attack;
  j["published"] = cfg.published;
  if (cfg.desk_scale) {
    j["desk_scale"] = {{"num_clients", cfg.desk_scale->num_clients},
                       {"k", cfg.desk_scale->k},
                       {"rounds", cfg.desk_scale->rounds}};
  }
  j["scale"] = {{"desk_scale_applied", cfg.desk_scale_applied},
                {"num_clients_factor", cfg.num_clients_factor},
                {"rounds_factor", cfg.rounds_factor}};
  return j;
}

ExperimentConfig ApplyDeskScale(const ExperimentConfig& cfg) {
  if (!cfg.desk_scale || cfg.desk_scale_applied) return cfg;
  ExperimentConfig out = cfg;
  const DeskScale& ds = *cfg.desk_scale;
  if (ds.num_clients > 0) {
    out.num_clients_factor =
        static_cast<double>(cfg.num_clients) / static_cast<double>(ds.num_clients);
    out.num_clients = ds.num_clients;
  }
  if (ds.k > 0) out.selection.k = ds.k;
  if (ds.rounds > 0) {
    out.rounds_factor = static_cast<double>(cfg.rounds) / static_cast<double>(ds.rounds);
    out.rounds = ds.rounds;
  }
  out.desk_scale_applied = true;
  ValidateConfig(out);
  return out;
}

std::vector<std::string> SweepableKeys(const ExperimentConfig& cfg) {
  std::vector<std::string> keys;
  Json j = ConfigToJson(cfg);
  j.erase("published");
  j.erase("scale");
  Leaves(j, "", keys);
  for (const auto& [alias, target] : Aliases()) keys.push_back(alias);
  return keys;
}

ExperimentConfig WithOverride(const ExperimentConfig& cfg, const std::string& key,
                              const std::string& value) {
  std::string path = key;
  for (const auto& [alias, target] : Aliases()) {
    if (key == alias) path = target;
  }
  const std::vector<std::string> valid = SweepableKeys(cfg);
  if (std::find(valid.begin(), valid.end(), path) == valid.end()) {
    std::string msg = "unknown sweep key '" + key + "'; valid keys:";
    for (const std::string& k : valid) msg += " " + k;
    throw ConfigError(key, msg);
  }
  Json j = ConfigToJson(cfg);
  Json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const Json::parse_error&) {
    parsed = value;
  }
  (*node)[parts.back()] = parsed;
  return ConfigFromJson(j);
}

}  // namespace flg
