// Copyright (c) 2026 The fairsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSV_PIPELINE_HPP_
#define FAIRSV_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairsv/features.hpp"
#include "fairsv/manifest.hpp"
#include "fairsv/splits.hpp"
#include "fairsv/trials.hpp"

namespace fairsv {

struct SynthOptions {
  int dim = 16;
  double spread = 0.05;
  // Keys are either a full group label ("spanish/female/old") or a
  // language-independent cell ("female_old").
  std::map<std::string, double> group_spreads;
  double genuine_mean = 0.7;
  double genuine_sd = 0.1;
  double impostor_mean = 0.3;
  double impostor_sd = 0.1;
  int n_genuine = 2000;
  int n_impostor = 2000;
};

// Run configuration, loaded from a JSON file. The seed is mandatory so
// that no run ever depends on the wall clock.
struct RunConfig {
  std::filesystem::path data_root = ".";
  std::map<std::string, std::filesystem::path> manifests;  // language -> csv
  std::uint64_t seed = 0;
  int n_folds = 3;
  int test_users_per_group = 25;
  int split_age = 40;
  int min_utterances = 5;
  int n_same = 64;
  int n_diff = 64;
  char delimiter = ',';
  FeatureConfig features;
  std::string embedding_source = "baseline";  // "baseline" | "import:<path>"
  SynthOptions synth;
  std::vector<std::string> warnings;  // ignored/unknown config keys
};

// seed_override (from --seed) wins over the config value. Training-only
// keys (architecture, epochs, ...) are accepted and reported as warnings.
RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override = {});

// Hash of the effective configuration (seed excluded; it names the run
// directory on its own).
std::string config_hash(const RunConfig& config);

struct PipelineContext {
  RunConfig config;
  std::filesystem::path out_root;
  int fold = 0;
  bool force = false;
  std::vector<std::string> languages;  // empty means all configured
};

// <out>/<config-hash>_s<seed>; fold-scoped stages live in fold<k>/ below it.
std::filesystem::path run_dir(const PipelineContext& ctx);
std::filesystem::path fold_dir(const PipelineContext& ctx);

std::vector<std::string> selected_languages(const PipelineContext& ctx);

// Stage runners. Each writes its artifacts (plus a .prov.json sidecar per
// artifact) and fails with an actionable diagnostic when an upstream
// artifact is missing. Reruns must either reproduce identical bytes or be
// forced.
void run_ingest(const PipelineContext& ctx);
void run_split(const PipelineContext& ctx,
               const std::vector<TrainRecipe>& recipes);
void run_trials(const PipelineContext& ctx, const std::vector<TestMode>& modes);
void run_extract(const PipelineContext& ctx);
void run_embed(const PipelineContext& ctx);
void run_synth_embeddings(const PipelineContext& ctx);
void run_synth_scores(const PipelineContext& ctx);
void run_score(const PipelineContext& ctx, const std::vector<TestMode>& modes,
               std::optional<int> epoch = {});
void run_eval(const PipelineContext& ctx,
              const std::optional<std::string>& mode_filter = {},
              const std::optional<std::string>& train_label = {});
void run_series(const PipelineContext& ctx,
                const std::vector<std::filesystem::path>& score_files);
void run_report(const PipelineContext& ctx,
                const std::optional<std::string>& train_filter = {},
                const std::optional<std::string>& mode_filter = {});

// "test1" | "test2" | "test3" (the CLI spelling of the three modes).
std::string mode_tag(TestMode mode);
TestMode parse_mode_tag(const std::string& tag);

// Shared artifact writer: atomic, refuses to change existing bytes unless
// forced, and drops a provenance sidecar next to the artifact.
void write_artifact(const PipelineContext& ctx, const std::string& stage,
                    const std::filesystem::path& path,
                    const std::string& content);

}  // namespace fairsv

#endif  // FAIRSV_PIPELINE_HPP_
