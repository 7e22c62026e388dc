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

#include "flg/harness/output.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "flg/common/error.h"

namespace flg {
namespace {

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Optional(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isinf(*v)) return "inf";
  return Fixed(*v);
}

Json NumberOrNull(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Json SummaryJson(const std::vector<double>& values) {
  if (values.empty()) return nullptr;
  const MeanStd s = Summarize(values);
  return Json{{"mean", s.mean}, {"std", s.std}, {"n", s.n}};
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

MeanStd Summarize(const std::vector<double>& values) {
  MeanStd s;
  s.n = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::string MetricsCsv(const ExperimentArtifacts& artifacts, bool header) {
  std::string out;
  if (header) out += std::string(kMetricsHeader) + "\n";
  for (const RepetitionResult& rep : artifacts.reps) {
    for (const RoundRecord& rec : rep.records) {
      out += std::to_string(rep.rep) + "," + std::to_string(rec.round + 1) + "," +
             Fixed(rec.main_accuracy) + "," + Optional(rec.backdoor_accuracy) + "," +
             Optional(rec.eps_spent) + "," + Optional(rec.attack_metric) + ",";
      for (size_t i = 0; i < rec.participants.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(rec.participants[i]);
      }
      out += "\n";
    }
  }
  return out;
}

Json AttackReportJson(const AttackReport& report) {
  Json config = Json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  return Json{{"attack", report.attack},
              {"accuracy", report.accuracy},
              {"auc", report.auc},
              {"confusion",
               {{"tp", report.confusion.tp},
                {"fp", report.confusion.fp},
                {"tn", report.confusion.tn},
                {"fn", report.confusion.fn}}},
              {"rounds", report.rounds},
              {"per_round", report.per_round},
              {"config", config}};
}

Json ReportJson(const ExperimentArtifacts& artifacts) {
  Json j;
  j["config"] = ConfigToJson(artifacts.config);
  j["rounds_executed"] = artifacts.rounds_executed();

  std::vector<double> eps, main_acc, backdoor_acc, auc, accuracy;
  Json reps = Json::array();
  std::string stop_reason = "completed";
  for (const RepetitionResult& rep : artifacts.reps) {
    Json r;
    r["rep"] = rep.rep;
    r["rounds_executed"] = rep.records.size();
    r["diverged"] = rep.diverged;
    r["error"] = rep.error;
    r["stop_reason"] = rep.stop_reason;
    r["eps"] = NumberOrNull(rep.eps);
    r["ldp_noise_multiplier"] = NumberOrNull(rep.ldp_noise_multiplier);
    if (!rep.records.empty()) {
      r["final_main_acc"] = rep.records.back().main_accuracy;
      r["final_backdoor_acc"] = NumberOrNull(rep.records.back().backdoor_accuracy);
    }
    r["attack_report"] = rep.attack ? AttackReportJson(*rep.attack) : Json(nullptr);
    reps.push_back(r);
    if (rep.stop_reason != "completed" && stop_reason == "completed") {
      stop_reason = rep.stop_reason;
    }
    // Divergent repetitions are reported above but excluded from averages.
    if (rep.diverged) continue;
    if (rep.eps && std::isfinite(*rep.eps)) eps.push_back(*rep.eps);
    if (!rep.records.empty()) {
      main_acc.push_back(rep.records.back().main_accuracy);
      if (rep.records.back().backdoor_accuracy) {
        backdoor_acc.push_back(*rep.records.back().backdoor_accuracy);
      }
    }
    if (rep.attack) {
      auc.push_back(rep.attack->auc);
      accuracy.push_back(rep.attack->accuracy);
    }
  }
  if (artifacts.all_diverged()) stop_reason = "diverged";

  j["privacy"] = {{"eps", eps.empty() ? Json(nullptr) : Json(Summarize(eps).mean)},
                  {"delta", artifacts.config.defense.delta},
                  {"accountant_mode", artifacts.accountant_mode}};
  if (auc.empty()) {
    j["attack_report"] = nullptr;
  } else {
    std::string name;
    for (const RepetitionResult& rep : artifacts.reps) {
      if (rep.attack) name = rep.attack->attack;
    }
    j["attack_report"] = {{"attack", name},
                          {"auc", Summarize(auc).mean},
                          {"auc_std", Summarize(auc).std},
                          {"accuracy", Summarize(accuracy).mean},
                          {"accuracy_std", Summarize(accuracy).std},
                          {"repetitions", auc.size()}};
  }
  j["stop_reason"] = stop_reason;
  j["repetitions"] = reps;
  j["summary"] = {{"final_main_acc", SummaryJson(main_acc)},
                  {"final_backdoor_acc", SummaryJson(backdoor_acc)},
                  {"eps", SummaryJson(eps)},
                  {"diverged_repetitions",
                   std::count_if(artifacts.reps.begin(), artifacts.reps.end(),
                                 [](const auto& r) { return r.diverged; })}};
  return j;
}

void WriteOutputs(const ExperimentArtifacts& artifacts, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  WriteFile(dir / "metrics.csv", MetricsCsv(artifacts));
  WriteFile(dir / "report.json", ReportJson(artifacts).dump(2) + "\n");
}

}  // namespace flg
