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

#ifndef FLG_HARNESS_EXPERIMENT_H_
#define FLG_HARNESS_EXPERIMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "flg/adversary/attack_model.h"
#include "flg/fl/engine.h"
#include "flg/harness/config.h"

namespace flg {

struct RepetitionResult {
  size_t rep = 0;
  std::vector<RoundRecord> records;
  std::optional<AttackReport> attack;
  bool diverged = false;
  std::string error;
  std::string stop_reason = "completed";
  std::optional<double> eps;
  // Noise multiplier actually used by LDP clients, if any.
  std::optional<double> ldp_noise_multiplier;
};

struct ExperimentArtifacts {
  ExperimentConfig config;
  std::vector<RepetitionResult> reps;
  std::string accountant_mode = "none";

  // Longest repetition; early stops show up per repetition in the report.
  size_t rounds_executed() const;
  bool all_diverged() const;
};

// Seed stream for one repetition; everything random in it derives from here.
RngStream RepetitionStream(uint64_t master_seed, size_t rep);

RepetitionResult RunRepetition(const ExperimentConfig& cfg, size_t rep);

// Runs every repetition. Divergent repetitions are recorded, not thrown.
ExperimentArtifacts RunExperiment(const ExperimentConfig& cfg);

// Noise multiplier for LDP clients under cfg (calibrated, given, or the
// absolute sigma when noise does not scale with S).
double ResolveLdpNoiseMultiplier(const ExperimentConfig& cfg);

}  // namespace flg

#endif  // FLG_HARNESS_EXPERIMENT_H_
