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

#ifndef FLG_HARNESS_PRESETS_H_
#define FLG_HARNESS_PRESETS_H_

#include <optional>
#include <string>
#include <vector>

#include "flg/harness/config.h"

namespace flg {

struct Preset {
  std::string name;
  std::string description;
  Json json;
};

// Bundled experiment configs, sorted by name.
const std::vector<Preset>& Presets();
const Preset* FindPreset(const std::string& name);
// Parsed preset; ConfigError for unknown names.
ExperimentConfig PresetConfig(const std::string& name);

}  // namespace flg

#endif  // FLG_HARNESS_PRESETS_H_
