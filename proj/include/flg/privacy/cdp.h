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

#ifndef FLG_PRIVACY_CDP_H_
#define FLG_PRIVACY_CDP_H_

#include <cstddef>
#include <string_view>

namespace flg {

enum class SigmaMode {
  // sigma = z * S / q, as written in the server loop of central DP.
  kLiteralZsOverQ,
  // sigma = z * S / C: the sensitivity of the mean of C updates clipped to S.
  kPerClientZsOverC,
};

SigmaMode ParseSigmaMode(std::string_view name);
std::string_view SigmaModeName(SigmaMode mode);

struct CdpConfig {
  double clip_bound = 1.0;        // S
  double noise_scale = 1.0;       // z
  double selection_prob = 1.0;    // q, in (0, 1]
  double budget_threshold = 1e9;  // T, in epsilon units
  double delta = 1e-5;
  SigmaMode sigma_mode = SigmaMode::kLiteralZsOverQ;

  void Validate() const;
};

// Server noise stddev for a round that aggregated `num_selected` updates.
double CdpSigma(const CdpConfig& cfg, size_t num_selected);

}  // namespace flg

#endif  // FLG_PRIVACY_CDP_H_
