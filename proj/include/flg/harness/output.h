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

#ifndef FLG_HARNESS_OUTPUT_H_
#define FLG_HARNESS_OUTPUT_H_

#include <string>

#include "flg/harness/experiment.h"

namespace flg {

inline constexpr const char* kMetricsHeader =
    "rep,round,main_acc,backdoor_acc,eps_spent,attack_metric,selected_clients";

// One row per executed round per repetition. Rounds are 1-based; optional
// fields are empty when they do not apply; participants are ';'-joined.
std::string MetricsCsv(const ExperimentArtifacts& artifacts, bool header = true);

Json AttackReportJson(const AttackReport& report);

// config, rounds_executed, privacy{eps, delta, accountant_mode},
// attack_report, stop_reason, plus per-repetition detail and summary stats.
Json ReportJson(const ExperimentArtifacts& artifacts);

// Writes metrics.csv and report.json into out_dir (created if missing).
void WriteOutputs(const ExperimentArtifacts& artifacts, const std::string& out_dir);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  size_t n = 0;
};
MeanStd Summarize(const std::vector<double>& values);

}  // namespace flg

#endif  // FLG_HARNESS_OUTPUT_H_
