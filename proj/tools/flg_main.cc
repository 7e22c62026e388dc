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

// flg: run, sweep, accountant and presets subcommands.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration or usage
// error, 3 every repetition diverged.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flg/common/error.h"
#include "flg/harness/config.h"
#include "flg/harness/experiment.h"
#include "flg/harness/output.h"
#include "flg/harness/presets.h"
#include "flg/privacy/rdp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct Source {
  std::string config_path;
  std::string preset;
  std::optional<uint64_t> seed;
  bool desk_scale = false;
};

void AddSourceOptions(CLI::App* cmd, Source& src) {
  auto* config = cmd->add_option("--config", src.config_path, "Experiment config (JSON)");
  auto* preset = cmd->add_option("--preset", src.preset, "Bundled preset name");
  config->excludes(preset);
  cmd->add_option("--seed", src.seed, "Override master_seed");
  cmd->add_flag("--desk-scale", src.desk_scale, "Apply the config's desk_scale block");
}

flg::ExperimentConfig LoadSource(const Source& src) {
  if (src.config_path.empty() && src.preset.empty()) {
    throw flg::ConfigError("--config", "one of --config or --preset is required");
  }
  flg::ExperimentConfig cfg =
      src.preset.empty() ? flg::LoadConfig(src.config_path) : flg::PresetConfig(src.preset);
  if (src.seed) cfg.master_seed = *src.seed;
  if (src.desk_scale) cfg = flg::ApplyDeskScale(cfg);
  return cfg;
}

int RunOne(const flg::ExperimentConfig& cfg, const std::string& out_dir,
           flg::ExperimentArtifacts* artifacts_out = nullptr) {
  flg::ExperimentArtifacts artifacts = flg::RunExperiment(cfg);
  flg::WriteOutputs(artifacts, out_dir);
  for (const flg::RepetitionResult& rep : artifacts.reps) {
    if (rep.diverged) {
      std::cerr << "repetition " << rep.rep << " diverged: " << rep.error << "\n";
    }
  }
  const bool all_diverged = artifacts.all_diverged();
  if (artifacts_out) *artifacts_out = std::move(artifacts);
  return all_diverged ? kExitDiverged : kExitOk;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

std::string DirName(const std::string& key, const std::string& value) {
  std::string name = key + "=" + value;
  for (char& c : name) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning robustness and privacy simulator"};
  app.require_subcommand(1);

  Source run_src;
  std::string run_out = "out";
  auto* run = app.add_subcommand("run", "Run one experiment");
  AddSourceOptions(run, run_src);
  run->add_option("--out", run_out, "Output directory");

  Source sweep_src;
  std::string sweep_out = "sweep_out";
  std::string vary;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per value of a key");
  AddSourceOptions(sweep, sweep_src);
  sweep->add_option("--vary", vary, "KEY=V1,V2,...")->required();
  sweep->add_option("--out", sweep_out, "Output directory");

  double q = 1.0, z = 1.0, delta = 1e-5;
  uint64_t steps = 1;
  auto* acct = app.add_subcommand("accountant", "Epsilon of a subsampled Gaussian mechanism");
  acct->add_option("--q", q, "Sampling probability")->required();
  acct->add_option("--z", z, "Noise multiplier")->required();
  acct->add_option("--steps", steps, "Number of steps")->required();
  acct->add_option("--delta", delta, "Target delta");

  bool list = false;
  std::string show;
  auto* presets = app.add_subcommand("presets", "List or print bundled presets");
  auto* list_opt = presets->add_flag("--list", list, "List preset names");
  auto* show_opt = presets->add_option("--show", show, "Print one preset as JSON");
  list_opt->excludes(show_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      const flg::ExperimentConfig cfg = LoadSource(run_src);
      return RunOne(cfg, run_out);
    }

    if (*sweep) {
      const flg::ExperimentConfig base = LoadSource(sweep_src);
      const size_t eq = vary.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == vary.size()) {
        throw flg::ConfigError("--vary", "expected KEY=V1,V2,...");
      }
      const std::string key = vary.substr(0, eq);
      const std::vector<std::string> values = Split(vary.substr(eq + 1), ',');
      // Materialize every point first so a bad value fails before any run.
      std::vector<flg::ExperimentConfig> points;
      for (const std::string& v : values) points.push_back(flg::WithOverride(base, key, v));
      std::filesystem::create_directories(sweep_out);
      std::ofstream combined(std::filesystem::path(sweep_out) / "sweep.csv", std::ios::binary);
      combined << "key,value," << flg::kMetricsHeader << "\n";
      bool all_diverged = true;
      for (size_t i = 0; i < points.size(); ++i) {
        const std::string dir =
            (std::filesystem::path(sweep_out) / DirName(key, values[i])).string();
        flg::ExperimentArtifacts artifacts;
        const int code = RunOne(points[i], dir, &artifacts);
        if (code != kExitDiverged) all_diverged = false;
        for (const std::string& line : Split(flg::MetricsCsv(artifacts, false), '\n')) {
          if (!line.empty()) combined << key << "," << values[i] << "," << line << "\n";
        }
        std::cerr << "sweep point " << key << "=" << values[i] << " -> " << dir << "\n";
      }
      return all_diverged ? kExitDiverged : kExitOk;
    }

    if (*acct) {
      if (!(delta > 0.0 && delta < 1.0)) throw flg::ConfigError("--delta", "must be in (0, 1)");
      if (!(q > 0.0 && q <= 1.0)) throw flg::ConfigError("--q", "must be in (0, 1]");
      if (!(z >= 0.0)) throw flg::ConfigError("--z", "must be >= 0");
      const double eps = flg::RdpToDp(flg::RdpCurve::SubsampledGaussian(q, z, steps), delta);
      if (std::isinf(eps)) {
        std::printf("infinite\n");
      } else {
        std::printf("%.6f\n", eps);
      }
      return kExitOk;
    }

    if (*presets) {
      if (!show.empty()) {
        const flg::Preset* p = flg::FindPreset(show);
        if (!p) throw flg::ConfigError(show, "unknown preset '" + show + "' (see presets --list)");
        std::cout << p->json.dump(2) << "\n";
        return kExitOk;
      }
      for (const flg::Preset& p : flg::Presets()) {
        std::cout << p.name << "\t" << p.description << "\n";
      }
      return kExitOk;
    }
  } catch (const flg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const flg::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const flg::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
