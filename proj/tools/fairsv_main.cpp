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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairsv/error.hpp"
#include "fairsv/pipeline.hpp"
#include "fairsv/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int fold = 0;
  bool force = false;
  std::vector<std::string> languages;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run configuration (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory root")->required();
  cmd->add_option("--seed", args.seed,
                  "Master seed (overrides the config value)");
  cmd->add_option("--fold", args.fold, "Fold index (default 0)");
  cmd->add_flag("--force", args.force, "Replace artifacts that already exist");
  cmd->add_option("--languages", args.languages,
                  "Subset of configured languages")
      ->delimiter(',');
}

fairsv::PipelineContext make_context(const CommonArgs& args) {
  fairsv::PipelineContext ctx;
  ctx.config = fairsv::load_run_config(args.config_path, args.seed);
  ctx.out_root = args.out_dir;
  ctx.fold = args.fold;
  ctx.force = args.force;
  ctx.languages = args.languages;
  for (const auto& warning : ctx.config.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  if (ctx.fold < 0 || ctx.fold >= ctx.config.n_folds) {
    throw fairsv::Error("cli", "fold " + std::to_string(ctx.fold) +
                                   " out of range for n_folds=" +
                                   std::to_string(ctx.config.n_folds));
  }
  return ctx;
}

std::vector<fairsv::TestMode> resolve_modes(const std::string& mode_tag) {
  using fairsv::TestMode;
  if (mode_tag.empty()) {
    return {TestMode::kSameAge, TestMode::kSameGender, TestMode::kRandom};
  }
  return {fairsv::parse_mode_tag(mode_tag)};
}

std::vector<fairsv::TrainRecipe> resolve_recipes(int recipe) {
  using fairsv::TrainRecipe;
  switch (recipe) {
    case 0:
      return {TrainRecipe::kUserBalanced, TrainRecipe::kUnbalanced,
              TrainRecipe::kUtteranceBalanced};
    case 1: return {TrainRecipe::kUserBalanced};
    case 2: return {TrainRecipe::kUnbalanced};
    case 3: return {TrainRecipe::kUtteranceBalanced};
    default:
      throw fairsv::Error("cli", "--train-recipe must be 1, 2 or 3");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairsv — fairness benchmarking for speaker verification"};
  app.set_version_flag("--version", FAIRSV_VERSION);
  app.require_subcommand(1);

  CommonArgs args;
  std::string mode_tag;
  int train_recipe = 0;
  std::optional<int> epoch;
  std::string synth_kind = "embeddings";
  std::string train_label;
  std::vector<std::string> series_scores;

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Load manifests, apply the eligibility filter, index groups");
  add_common(ingest, args);

  CLI::App* split = app.add_subcommand(
      "split", "Select the test roster and build training splits");
  add_common(split, args);
  split->add_option("--train-recipe", train_recipe,
                    "Build only recipe 1 (user-balanced), 2 (unbalanced) or "
                    "3 (utterance-balanced)");

  CLI::App* trials =
      app.add_subcommand("trials", "Generate verification trial pairs");
  add_common(trials, args);
  trials->add_option("--mode", mode_tag, "test1|test2|test3 (default: all)");

  CLI::App* extract =
      app.add_subcommand("extract", "Compute log-mel features for the roster");
  add_common(extract, args);

  CLI::App* embed = app.add_subcommand(
      "embed", "Produce utterance embeddings (baseline or imported)");
  add_common(embed, args);

  CLI::App* score =
      app.add_subcommand("score", "Score trial pairs by cosine similarity");
  add_common(score, args);
  score->add_option("--mode", mode_tag, "test1|test2|test3 (default: all)");
  score->add_option("--epoch", epoch, "Tag scores with a model epoch");

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Compute EER/FAR/FRR and disparity scores");
  add_common(eval_cmd, args);
  eval_cmd->add_option("--mode", mode_tag, "Only score files of this mode");
  eval_cmd->add_option("--train-label", train_label,
                       "Train-file id recorded in result rows");

  CLI::App* series =
      app.add_subcommand("series", "Per-epoch EER series from score files");
  add_common(series, args);
  series
      ->add_option("--scores", series_scores,
                   "Epoch-tagged score files (repeatable)")
      ->required();

  CLI::App* synth = app.add_subcommand(
      "synth", "Synthesize embeddings or scores with a known oracle");
  add_common(synth, args);
  synth->add_option("--kind", synth_kind, "embeddings (default) or scores")
      ->check(CLI::IsMember({"embeddings", "scores"}));

  CLI::App* report =
      app.add_subcommand("report", "Emit result tables from eval rows");
  add_common(report, args);
  report->add_option("--mode", mode_tag, "Only rows of this test mode");
  report->add_option("--train-label", train_label,
                     "Only rows with this train-file id");

  CLI11_PARSE(app, argc, argv);

  try {
    const fairsv::PipelineContext ctx = make_context(args);
    auto opt = [](const std::string& s) {
      return s.empty() ? std::nullopt : std::optional<std::string>(s);
    };

    if (ingest->parsed()) {
      fairsv::run_ingest(ctx);
    } else if (split->parsed()) {
      fairsv::run_split(ctx, resolve_recipes(train_recipe));
    } else if (trials->parsed()) {
      fairsv::run_trials(ctx, resolve_modes(mode_tag));
    } else if (extract->parsed()) {
      fairsv::run_extract(ctx);
    } else if (embed->parsed()) {
      fairsv::run_embed(ctx);
    } else if (score->parsed()) {
      fairsv::run_score(ctx, resolve_modes(mode_tag), epoch);
    } else if (eval_cmd->parsed()) {
      fairsv::run_eval(ctx, opt(mode_tag), opt(train_label));
    } else if (series->parsed()) {
      std::vector<std::filesystem::path> paths(series_scores.begin(),
                                               series_scores.end());
      fairsv::run_series(ctx, paths);
    } else if (synth->parsed()) {
      if (synth_kind == "scores") {
        fairsv::run_synth_scores(ctx);
      } else {
        fairsv::run_synth_embeddings(ctx);
      }
    } else if (report->parsed()) {
      fairsv::run_report(ctx, opt(train_label), opt(mode_tag));
    }
    std::cout << "artifacts under " << fairsv::run_dir(ctx).string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
