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

#include "flg/privacy/cdp.h"

#include <string>

#include "flg/common/error.h"

namespace flg {

SigmaMode ParseSigmaMode(std::string_view name) {
  if (name == "literal_zS_over_q") return SigmaMode::kLiteralZsOverQ;
  if (name == "per_client_zS_over_C") return SigmaMode::kPerClientZsOverC;
  throw InvalidArgument("unknown sigma mode '" + std::string(name) + "'");
}

std::string_view SigmaModeName(SigmaMode mode) {
  return mode == SigmaMode::kLiteralZsOverQ ? "literal_zS_over_q"
                                            : "per_client_zS_over_C";
}

void CdpConfig::Validate() const {
  if (!(clip_bound > 0.0)) throw InvalidArgument("CDP clip bound must be positive");
  if (!(noise_scale >= 0.0)) throw InvalidArgument("CDP noise scale must be >= 0");
  if (!(selection_prob > 0.0 && selection_prob <= 1.0)) {
    throw InvalidArgument("CDP selection probability must be in (0, 1]");
  }
  if (!(budget_threshold > 0.0)) throw InvalidArgument("CDP budget must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("CDP delta must be in (0, 1)");
}

double CdpSigma(const CdpConfig& cfg, size_t num_selected) {
  if (!(cfg.selection_prob > 0.0)) throw InvalidArgument("CdpSigma: q must be positive");
  if (num_selected == 0) throw InvalidArgument("CdpSigma: need at least one update");
  switch (cfg.sigma_mode) {
    case SigmaMode::kLiteralZsOverQ:
      return cfg.noise_scale * cfg.clip_bound / cfg.selection_prob;
    case SigmaMode::kPerClientZsOverC:
      return cfg.noise_scale * cfg.clip_bound / static_cast<double>(num_selected);
  }
  return 0.0;
}

}  // namespace flg
