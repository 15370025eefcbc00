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

#include "fairsv/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"
#include "fairsv/metrics.hpp"
#include "fairsv/random.hpp"
#include "fairsv/report.hpp"
#include "fairsv/scoring.hpp"
#include "fairsv/synth.hpp"
#include "fairsv/version.hpp"
#include "fairsv/wav.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "cli";

using nlohmann::json;

const std::set<std::string> kTrainingOnlyKeys = {
    "architecture", "epochs", "batch_size", "learning_rate", "optimizer",
    "training"};

const std::set<std::string> kKnownKeys = {
    "data_root",   "manifests",  "seed",        "n_folds",
    "test_users_per_group",      "split_age",   "min_utterances",
    "n_same",      "n_diff",     "delimiter",   "features",
    "embedding_source",          "synth"};

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path resolve_under(const std::filesystem::path& root,
                                    const std::filesystem::path& p) {
  return p.is_absolute() ? p : root / p;
}

void require_artifact(const std::filesystem::path& path,
                      const std::string& producer) {
  if (!std::filesystem::exists(path)) {
    throw Error(kModule, "missing stage artifact " + path.string() +
                             " (run `fairsv " + producer + "` first)");
  }
}

std::string cell_name(Gender g, AgeBucket b) {
  return to_string(g) + "_" + to_string(b);
}

// --- ingest artifact -------------------------------------------------------

std::string serialize_index(const DatasetIndex& index, char delimiter) {
  std::string out = join_fields({"speaker_id", "language", "gender", "age",
                                 "utterance_id", "utterance_path"},
                                delimiter, kModule);
  out.push_back('\n');
  for (const auto& r : index.records) {
    for (const auto& u : r.utterances) {
      out += join_fields({r.speaker_id, r.language, to_string(r.gender),
                          std::to_string(r.age_years), u.utterance_id,
                          u.audio_path},
                         delimiter, kModule);
      out.push_back('\n');
    }
  }
  return out;
}

DatasetIndex parse_index(const std::string& text, char delimiter,
                         int split_age) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  const std::size_t c_spk = table.column("speaker_id", kModule);
  const std::size_t c_lang = table.column("language", kModule);
  const std::size_t c_gender = table.column("gender", kModule);
  const std::size_t c_age = table.column("age", kModule);
  const std::size_t c_utt = table.column("utterance_id", kModule);
  const std::size_t c_path = table.column("utterance_path", kModule);

  std::vector<SpeakerRecord> records;
  std::map<std::string, std::size_t> by_id;
  for (const auto& row : table.rows) {
    const std::string& id = row.at(c_spk);
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      SpeakerRecord r;
      r.speaker_id = id;
      r.language = row.at(c_lang);
      r.gender = parse_gender(row.at(c_gender));
      r.age_years =
          static_cast<int>(parse_int_strict(row.at(c_age), kModule, "age"));
      by_id.emplace(id, records.size());
      records.push_back(std::move(r));
      it = by_id.find(id);
    }
    records[it->second].utterances.push_back({row.at(c_utt), row.at(c_path)});
  }
  return build_index(std::move(records), split_age);
}

std::filesystem::path ingest_index_path(const PipelineContext& ctx,
                                        const std::string& language) {
  return run_dir(ctx) / "ingest" / (language + "_index.csv");
}

DatasetIndex load_ingested(const PipelineContext& ctx,
                           const std::string& language) {
  const auto path = ingest_index_path(ctx, language);
  require_artifact(path, "ingest");
  return parse_index(read_text_file(path, kModule), ctx.config.delimiter,
                     ctx.config.split_age);
}

std::filesystem::path roster_path(const PipelineContext& ctx) {
  return fold_dir(ctx) / "split" / "roster.csv";
}

TestRoster load_roster(const PipelineContext& ctx) {
  const auto path = roster_path(ctx);
  require_artifact(path, "split");
  return parse_roster(read_text_file(path, kModule), ctx.fold,
                      ctx.config.delimiter);
}

SplitConfig split_config(const RunConfig& config) {
  SplitConfig cfg;
  cfg.seed = config.seed;
  cfg.test_users_per_group = config.test_users_per_group;
  cfg.n_folds = config.n_folds;
  cfg.split_age = config.split_age;
  return cfg;
}

std::filesystem::path embeddings_path(const PipelineContext& ctx,
                                      const std::string& language) {
  return fold_dir(ctx) / "embed" / ("embeddings_" + language + ".csv");
}

std::filesystem::path trials_path(const PipelineContext& ctx, TestMode mode,
                                  const std::string& language) {
  return fold_dir(ctx) / "trials" /
         ("trials_" + mode_tag(mode) + "_" + language + ".csv");
}

std::filesystem::path features_path(const PipelineContext& ctx,
                                    const std::string& language) {
  return fold_dir(ctx) / "extract" / ("features_" + language + ".csv");
}

std::map<GroupKey, double> resolve_spreads(const PipelineContext& ctx,
                                           const TestRoster& roster) {
  std::map<GroupKey, double> spreads;
  const auto& table = ctx.config.synth.group_spreads;
  for (const auto& [group, ids] : roster.members) {
    auto it = table.find(group.label());
    if (it == table.end()) {
      it = table.find(cell_name(group.gender, group.bucket));
    }
    if (it != table.end()) spreads[group] = it->second;
  }
  return spreads;
}

}  // namespace

std::string mode_tag(TestMode mode) {
  switch (mode) {
    case TestMode::kSameAge: return "test1";
    case TestMode::kSameGender: return "test2";
    case TestMode::kRandom: return "test3";
  }
  throw Error(kModule, "invalid mode value");
}

TestMode parse_mode_tag(const std::string& tag) {
  if (tag == "test1") return TestMode::kSameAge;
  if (tag == "test2") return TestMode::kSameGender;
  if (tag == "test3") return TestMode::kRandom;
  throw Error(kModule, "unknown mode '" + tag + "' (expected test1|test2|test3)");
}

RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(read_text_file(path, kModule));
  } catch (const json::exception& e) {
    throw Error(kModule, "cannot parse config " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(kModule, "config must be a JSON object");

  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (kTrainingOnlyKeys.count(key)) {
      cfg.warnings.push_back("config key '" + key +
                             "' is training-only and ignored by this toolkit");
    } else if (!kKnownKeys.count(key)) {
      cfg.warnings.push_back("unknown config key '" + key + "' ignored");
    }
  }

  try {
    if (doc.contains("data_root")) {
      cfg.data_root = doc["data_root"].get<std::string>();
    }
    if (const char* env_root = std::getenv("FAIRSV_DATA_ROOT")) {
      cfg.data_root = env_root;
    }
    if (doc.contains("manifests")) {
      for (const auto& [lang, p] : doc["manifests"].items()) {
        cfg.manifests[lang] = p.get<std::string>();
      }
    }
    if (seed_override) {
      cfg.seed = *seed_override;
    } else if (doc.contains("seed")) {
      cfg.seed = doc["seed"].get<std::uint64_t>();
    } else {
      throw Error(kModule,
                  "seed is mandatory (set it in the config or pass --seed)");
    }
    cfg.n_folds = doc.value("n_folds", cfg.n_folds);
    cfg.test_users_per_group =
        doc.value("test_users_per_group", cfg.test_users_per_group);
    cfg.split_age = doc.value("split_age", cfg.split_age);
    cfg.min_utterances = doc.value("min_utterances", cfg.min_utterances);
    cfg.n_same = doc.value("n_same", cfg.n_same);
    cfg.n_diff = doc.value("n_diff", cfg.n_diff);
    if (doc.contains("delimiter")) {
      const std::string d = doc["delimiter"].get<std::string>();
      if (d.size() != 1) {
        throw Error(kModule, "delimiter must be a single character");
      }
      cfg.delimiter = d[0];
    }
    if (doc.contains("features")) {
      const json& f = doc["features"];
      cfg.features.window_ms = f.value("window_ms", cfg.features.window_ms);
      cfg.features.hop_ms = f.value("hop_ms", cfg.features.hop_ms);
      cfg.features.fft_size = f.value("fft_size", cfg.features.fft_size);
      cfg.features.n_mels = f.value("n_mels", cfg.features.n_mels);
      cfg.features.fmin_hz = f.value("fmin_hz", cfg.features.fmin_hz);
      cfg.features.fmax_hz = f.value("fmax_hz", cfg.features.fmax_hz);
      cfg.features.log_floor = f.value("log_floor", cfg.features.log_floor);
    }
    cfg.embedding_source = doc.value("embedding_source", cfg.embedding_source);
    if (doc.contains("synth")) {
      const json& s = doc["synth"];
      cfg.synth.dim = s.value("dim", cfg.synth.dim);
      cfg.synth.spread = s.value("spread", cfg.synth.spread);
      if (s.contains("group_spreads")) {
        for (const auto& [k, v] : s["group_spreads"].items()) {
          cfg.synth.group_spreads[k] = v.get<double>();
        }
      }
      cfg.synth.genuine_mean = s.value("genuine_mean", cfg.synth.genuine_mean);
      cfg.synth.genuine_sd = s.value("genuine_sd", cfg.synth.genuine_sd);
      cfg.synth.impostor_mean =
          s.value("impostor_mean", cfg.synth.impostor_mean);
      cfg.synth.impostor_sd = s.value("impostor_sd", cfg.synth.impostor_sd);
      cfg.synth.n_genuine = s.value("n_genuine", cfg.synth.n_genuine);
      cfg.synth.n_impostor = s.value("n_impostor", cfg.synth.n_impostor);
    }
  } catch (const json::exception& e) {
    throw Error(kModule, "bad config value: " + std::string(e.what()));
  }

  if (cfg.manifests.empty()) {
    throw Error(kModule, "config must list at least one manifest per language");
  }
  if (cfg.embedding_source != "baseline" &&
      cfg.embedding_source.rfind("import:", 0) != 0) {
    throw Error(kModule, "embedding_source must be 'baseline' or 'import:<path>'");
  }
  return cfg;
}

std::string config_hash(const RunConfig& config) {
  json doc;
  doc["data_root"] = config.data_root.string();
  json manifests;
  for (const auto& [lang, p] : config.manifests) manifests[lang] = p.string();
  doc["manifests"] = manifests;
  doc["n_folds"] = config.n_folds;
  doc["test_users_per_group"] = config.test_users_per_group;
  doc["split_age"] = config.split_age;
  doc["min_utterances"] = config.min_utterances;
  doc["n_same"] = config.n_same;
  doc["n_diff"] = config.n_diff;
  doc["delimiter"] = std::string(1, config.delimiter);
  doc["features"] = {
      {"window_ms", config.features.window_ms},
      {"hop_ms", config.features.hop_ms},
      {"fft_size", config.features.fft_size},
      {"n_mels", config.features.n_mels},
      {"fmin_hz", config.features.fmin_hz},
      {"fmax_hz", config.features.fmax_hz},
      {"log_floor", config.features.log_floor}};
  doc["embedding_source"] = config.embedding_source;
  doc["synth"] = {{"dim", config.synth.dim},
                  {"spread", config.synth.spread},
                  {"group_spreads", config.synth.group_spreads},
                  {"genuine_mean", config.synth.genuine_mean},
                  {"genuine_sd", config.synth.genuine_sd},
                  {"impostor_mean", config.synth.impostor_mean},
                  {"impostor_sd", config.synth.impostor_sd},
                  {"n_genuine", config.synth.n_genuine},
                  {"n_impostor", config.synth.n_impostor}};
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(doc.dump())));
  return buf;
}

std::filesystem::path run_dir(const PipelineContext& ctx) {
  return ctx.out_root / (config_hash(ctx.config).substr(0, 12) + "_s" +
                         std::to_string(ctx.config.seed));
}

std::filesystem::path fold_dir(const PipelineContext& ctx) {
  return run_dir(ctx) / ("fold" + std::to_string(ctx.fold));
}

std::vector<std::string> selected_languages(const PipelineContext& ctx) {
  std::vector<std::string> all;
  for (const auto& [lang, path] : ctx.config.manifests) all.push_back(lang);
  if (ctx.languages.empty()) return all;
  for (const auto& lang : ctx.languages) {
    if (!ctx.config.manifests.count(lang)) {
      throw Error(kModule, "language '" + lang + "' has no configured manifest");
    }
  }
  return ctx.languages;
}

void write_artifact(const PipelineContext& ctx, const std::string& stage,
                    const std::filesystem::path& path,
                    const std::string& content) {
  std::filesystem::create_directories(path.parent_path());

  json prov;
  prov["artifact"] = path.filename().string();
  prov["stage"] = stage;
  prov["config_hash"] = config_hash(ctx.config);
  prov["seed"] = ctx.config.seed;
  prov["fold"] = ctx.fold;
  prov["toolkit_version"] = FAIRSV_VERSION;
  const std::string sidecar_content = prov.dump(2) + "\n";
  std::filesystem::path sidecar = path;
  sidecar += ".prov.json";

  auto place = [&ctx](const std::filesystem::path& target,
                      const std::string& bytes) {
    if (std::filesystem::exists(target) && !ctx.force) {
      if (read_text_file(target, kModule) == bytes) return;  // identical rerun
      throw Error(kModule, "artifact exists with different content: " +
                               target.string() + " (pass --force to replace)");
    }
    write_text_file_atomic(target, bytes, kModule);
  };
  place(path, content);
  place(sidecar, sidecar_content);
}

void run_ingest(const PipelineContext& ctx) {
  for (const auto& lang : selected_languages(ctx)) {
    const auto manifest_path =
        resolve_under(ctx.config.data_root, ctx.config.manifests.at(lang));
    ManifestOptions options;
    options.delimiter = ctx.config.delimiter;
    options.split_age = ctx.config.split_age;
    DatasetIndex index = load_manifest(manifest_path, lang, options);
    index = filter_min_utterances(
        index, static_cast<std::size_t>(ctx.config.min_utterances));

    write_artifact(ctx, "ingest", ingest_index_path(ctx, lang),
                   serialize_index(index, ctx.config.delimiter));

    std::string counts = join_fields(
        {"language", "gender", "age_bucket", "speakers"}, ctx.config.delimiter,
        kModule);
    counts.push_back('\n');
    for (const auto& [group, n] : group_counts(index)) {
      counts += join_fields({group.language, to_string(group.gender),
                             to_string(group.bucket), std::to_string(n)},
                            ctx.config.delimiter, kModule);
      counts.push_back('\n');
    }
    write_artifact(ctx, "ingest",
                   run_dir(ctx) / "ingest" / (lang + "_group_counts.csv"),
                   counts);
  }
}

void run_split(const PipelineContext& ctx,
               const std::vector<TrainRecipe>& recipes) {
  const auto languages = selected_languages(ctx);
  const SplitConfig cfg = split_config(ctx.config);

  std::vector<DatasetIndex> indexes;
  for (const auto& lang : languages) indexes.push_back(load_ingested(ctx, lang));
  const DatasetIndex merged = merge_indexes(indexes);
  const TestRoster roster = select_test_roster(merged, cfg, ctx.fold);
  write_artifact(ctx, "split", roster_path(ctx),
                 serialize_roster(roster, ctx.config.delimiter));

  for (TrainRecipe recipe : recipes) {
    std::vector<TrainSplit> per_language;
    for (std::size_t i = 0; i < languages.size(); ++i) {
      const TestRoster lang_roster = roster.for_language(languages[i]);
      TrainSplit split;
      switch (recipe) {
        case TrainRecipe::kUserBalanced:
          split = build_train_user_balanced(indexes[i], lang_roster, cfg);
          break;
        case TrainRecipe::kUnbalanced:
          split = build_train_unbalanced(indexes[i], lang_roster);
          break;
        case TrainRecipe::kUtteranceBalanced:
          split = build_train_utterance_balanced(indexes[i], lang_roster, cfg);
          break;
      }
      write_artifact(ctx, "split",
                     fold_dir(ctx) / "split" /
                         ("train_" + to_string(recipe) + "_" + languages[i] +
                          ".csv"),
                     serialize_split(split, ctx.config.delimiter));
      per_language.push_back(std::move(split));
    }
    if (per_language.size() > 1) {
      const TrainSplit multi = merge_language_splits(per_language);
      write_artifact(ctx, "split",
                     fold_dir(ctx) / "split" /
                         ("train_" + to_string(recipe) + "_multi.csv"),
                     serialize_split(multi, ctx.config.delimiter));
    }
  }
}

void run_trials(const PipelineContext& ctx,
                const std::vector<TestMode>& modes) {
  const TestRoster roster = load_roster(ctx);
  const std::uint64_t fold_seed =
      derive_seed(ctx.config.seed, static_cast<std::uint64_t>(ctx.fold));
  for (const auto& lang : selected_languages(ctx)) {
    const DatasetIndex index = load_ingested(ctx, lang);
    const TestRoster lang_roster = roster.for_language(lang);
    for (TestMode mode : modes) {
      const std::uint64_t seed =
          derive_seed(fold_seed, "trials|" + to_string(mode) + "|" + lang);
      const TrialFile file =
          gen_trials(lang_roster, index, mode, ctx.config.n_same,
                     ctx.config.n_diff, seed);
      write_artifact(ctx, "trials", trials_path(ctx, mode, lang),
                     serialize_trials(file, ctx.config.delimiter));
    }
  }
}

void run_extract(const PipelineContext& ctx) {
  const TestRoster roster = load_roster(ctx);
  for (const auto& lang : selected_languages(ctx)) {
    const DatasetIndex index = load_ingested(ctx, lang);
    const TestRoster lang_roster = roster.for_language(lang);

    std::vector<std::string> header{"speaker_id", "utterance_id",
                                    "frame_index"};
    for (int b = 0; b < ctx.config.features.n_mels; ++b) {
      header.push_back("b" + std::to_string(b));
    }
    std::string out = join_fields(header, ctx.config.delimiter, kModule);
    out.push_back('\n');

    for (const auto& [group, ids] : lang_roster.members) {
      for (const auto& id : ids) {
        const SpeakerRecord& speaker = index.speaker(id);
        for (const auto& utt : speaker.utterances) {
          const auto wav_path =
              resolve_under(ctx.config.data_root, utt.audio_path);
          const Waveform wave = load_wav(wav_path);
          const FeatureMatrix feats = logmel(wave, ctx.config.features);
          std::vector<std::string> fields(3 + feats.bins);
          fields[0] = id;
          fields[1] = utt.utterance_id;
          for (std::size_t f = 0; f < feats.frames; ++f) {
            fields[2] = std::to_string(f);
            for (std::size_t b = 0; b < feats.bins; ++b) {
              fields[3 + b] = format_general(feats.at(f, b));
            }
            out += join_fields(fields, ctx.config.delimiter, kModule);
            out.push_back('\n');
          }
        }
      }
    }
    write_artifact(ctx, "extract", features_path(ctx, lang), out);
  }
}

void run_embed(const PipelineContext& ctx) {
  const TestRoster roster = load_roster(ctx);
  const bool use_import = ctx.config.embedding_source.rfind("import:", 0) == 0;

  for (const auto& lang : selected_languages(ctx)) {
    const TestRoster lang_roster = roster.for_language(lang);
    EmbeddingStore store;

    if (use_import) {
      const std::filesystem::path src = resolve_under(
          ctx.config.data_root, ctx.config.embedding_source.substr(7));
      require_artifact(src, "embed (external embeddings are expected at the "
                            "configured import path)");
      const EmbeddingStore imported =
          import_embeddings(src, ctx.config.delimiter);
      const std::set<std::string> wanted = lang_roster.speakers();
      for (const auto& [key, e] : imported.entries()) {
        if (wanted.count(key.first)) store.insert(key.first, key.second, e);
      }
      if (store.empty()) {
        throw Error(kModule, "imported embeddings cover no roster speaker of "
                             "language '" + lang + "'");
      }
    } else {
      const auto feats_path = features_path(ctx, lang);
      require_artifact(feats_path, "extract");
      DelimitedTable table = read_delimited_file(
          feats_path, ctx.config.delimiter, kModule);
      const std::size_t c_spk = table.column("speaker_id", kModule);
      const std::size_t c_utt = table.column("utterance_id", kModule);
      const std::size_t first_band = 3;
      const std::size_t bins = table.header.size() - first_band;

      // Rows are grouped by utterance in frame order.
      std::string cur_spk, cur_utt;
      FeatureMatrix m;
      m.kind = FeatureKind::kLogMel;
      m.bins = bins;
      auto flush = [&]() {
        if (m.frames == 0) return;
        store.insert(cur_spk, cur_utt, baseline_embed(m));
        m.frames = 0;
        m.data.clear();
      };
      for (const auto& row : table.rows) {
        if (row.at(c_spk) != cur_spk || row.at(c_utt) != cur_utt) {
          flush();
          cur_spk = row.at(c_spk);
          cur_utt = row.at(c_utt);
        }
        for (std::size_t b = 0; b < bins; ++b) {
          m.data.push_back(parse_double_strict(row.at(first_band + b), kModule,
                                               "feature value"));
        }
        ++m.frames;
      }
      flush();
    }

    write_artifact(ctx, "embed", embeddings_path(ctx, lang),
                   serialize_embeddings(store, ctx.config.delimiter));
  }
}

void run_synth_embeddings(const PipelineContext& ctx) {
  const TestRoster roster = load_roster(ctx);
  const std::uint64_t fold_seed =
      derive_seed(ctx.config.seed, static_cast<std::uint64_t>(ctx.fold));
  for (const auto& lang : selected_languages(ctx)) {
    const DatasetIndex index = load_ingested(ctx, lang);
    const TestRoster lang_roster = roster.for_language(lang);
    const EmbeddingStore store = synth_embeddings(
        lang_roster, index, ctx.config.synth.dim, ctx.config.synth.spread,
        derive_seed(fold_seed, "synth_embeddings|" + lang),
        resolve_spreads(ctx, lang_roster));
    write_artifact(ctx, "synth", embeddings_path(ctx, lang),
                   serialize_embeddings(store, ctx.config.delimiter));
  }
}

void run_synth_scores(const PipelineContext& ctx) {
  const std::uint64_t fold_seed =
      derive_seed(ctx.config.seed, static_cast<std::uint64_t>(ctx.fold));
  for (const auto& lang : selected_languages(ctx)) {
    GroupScoreSpec spec;
    for (Gender g : {Gender::kFemale, Gender::kMale}) {
      for (AgeBucket b : {AgeBucket::kYoung, AgeBucket::kOld}) {
        GroupScoreParams params;
        params.genuine_mean = ctx.config.synth.genuine_mean;
        params.genuine_sd = ctx.config.synth.genuine_sd;
        params.impostor_mean = ctx.config.synth.impostor_mean;
        params.impostor_sd = ctx.config.synth.impostor_sd;
        params.n_genuine = ctx.config.synth.n_genuine;
        params.n_impostor = ctx.config.synth.n_impostor;
        spec.groups.emplace(GroupKey{lang, g, b}, params);
      }
    }
    const ScoreFile file =
        synth_scores(spec, derive_seed(fold_seed, "synth_scores|" + lang));
    write_artifact(ctx, "synth",
                   fold_dir(ctx) / "score" / ("scores_synth_" + lang + ".csv"),
                   serialize_scores(file, ctx.config.delimiter));
  }
}

void run_score(const PipelineContext& ctx, const std::vector<TestMode>& modes,
               std::optional<int> epoch) {
  for (const auto& lang : selected_languages(ctx)) {
    const auto emb_path = embeddings_path(ctx, lang);
    require_artifact(emb_path, "embed (or `fairsv synth`)");
    const EmbeddingStore store = parse_embeddings(
        read_text_file(emb_path, kModule), ctx.config.delimiter);

    for (TestMode mode : modes) {
      const auto t_path = trials_path(ctx, mode, lang);
      require_artifact(t_path, "trials");
      const TrialFile trials = parse_trials(
          read_text_file(t_path, kModule), mode, ctx.fold, ctx.config.n_same,
          ctx.config.n_diff, ctx.config.delimiter);
      const ScoreFile scores = score_trials(trials, store, epoch);
      std::string name = "scores_" + mode_tag(mode) + "_" + lang;
      if (epoch) name += "_epoch" + std::to_string(*epoch);
      write_artifact(ctx, "score", fold_dir(ctx) / "score" / (name + ".csv"),
                     serialize_scores(scores, ctx.config.delimiter));
    }
  }
}

void run_eval(const PipelineContext& ctx,
              const std::optional<std::string>& mode_filter,
              const std::optional<std::string>& train_label) {
  const auto score_dir = fold_dir(ctx) / "score";
  require_artifact(score_dir, "score (or `fairsv synth --kind scores`)");

  std::vector<std::filesystem::path> score_files;
  for (const auto& entry : std::filesystem::directory_iterator(score_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("scores_", 0) != 0 || entry.path().extension() != ".csv") {
      continue;
    }
    if (mode_filter &&
        name.rfind("scores_" + *mode_filter + "_", 0) != 0) {
      continue;
    }
    score_files.push_back(entry.path());
  }
  std::sort(score_files.begin(), score_files.end());
  if (score_files.empty()) {
    throw Error(kModule, "no score artifacts under " + score_dir.string() +
                             (mode_filter ? " for mode " + *mode_filter : "") +
                             " (run `fairsv score` first)");
  }

  std::string default_label = "baseline";
  if (ctx.config.embedding_source.rfind("import:", 0) == 0) {
    default_label = "import";
  }

  for (const auto& path : score_files) {
    const ScoreFile scores =
        parse_scores(read_text_file(path, kModule), ctx.config.delimiter);
    const auto [metrics, ds] = evaluate(scores);

    // scores_<tag>_<language>[_epochK]
    std::string stem = path.stem().string().substr(7);

    json doc;
    auto slice_json = [](const SliceMetrics& m) {
      return json{{"eer", m.eer.eer},
                  {"threshold", m.eer.threshold},
                  {"far_at_overall_threshold", m.far},
                  {"frr_at_overall_threshold", m.frr}};
    };
    doc["overall"] = {{"eer", metrics.overall.eer},
                      {"threshold", metrics.overall.threshold},
                      {"far_at_t", metrics.overall.far_at_t},
                      {"frr_at_t", metrics.overall.frr_at_t}};
    for (const auto& [bucket, m] : metrics.by_bucket) {
      doc["by_age_bucket"][to_string(bucket)] = slice_json(m);
    }
    for (const auto& [gender, m] : metrics.by_gender) {
      doc["by_gender"][to_string(gender)] = slice_json(m);
    }
    for (const auto& [group, m] : metrics.by_group) {
      doc["by_group"][group.label()] = slice_json(m);
    }
    doc["disparity"] = {{"ds_young_old", ds.ds_young_old},
                        {"ds_male_female", ds.ds_male_female}};
    for (const auto& [a, b, value] : ds.pairwise) {
      doc["disparity"]["pairwise"].push_back(
          {{"group_a", a.label()}, {"group_b", b.label()}, {"ds", value}});
    }
    write_artifact(ctx, "eval",
                   fold_dir(ctx) / "eval" / ("metrics_" + stem + ".json"),
                   doc.dump(2) + "\n");

    ResultRow row;
    row.train_file_id = train_label.value_or(default_label);
    row.test_file_id = stem;
    row.eer = metrics.overall.eer * 100.0;
    row.eer_old = metrics.by_bucket.at(AgeBucket::kOld).eer.eer * 100.0;
    row.eer_young = metrics.by_bucket.at(AgeBucket::kYoung).eer.eer * 100.0;
    row.eer_female = metrics.by_gender.at(Gender::kFemale).eer.eer * 100.0;
    row.eer_male = metrics.by_gender.at(Gender::kMale).eer.eer * 100.0;
    row.ds_young_old = ds.ds_young_old * 100.0;
    row.ds_male_female = ds.ds_male_female * 100.0;
    write_artifact(ctx, "eval",
                   fold_dir(ctx) / "eval" / ("row_" + stem + ".csv"),
                   emit_table({row}, TableFormat::kCsv));
  }
}

void run_series(const PipelineContext& ctx,
                const std::vector<std::filesystem::path>& score_files) {
  if (score_files.empty()) {
    throw Error(kModule, "series needs at least one score file");
  }
  std::vector<ScoreFile> files;
  for (const auto& path : score_files) {
    require_artifact(path, "score --epoch <k>");
    files.push_back(
        parse_scores(read_text_file(path, kModule), ctx.config.delimiter));
  }
  const EpochSeries series = epoch_series(files);
  write_artifact(ctx, "series", fold_dir(ctx) / "series" / "series.csv",
                 emit_series(series));
}

void run_report(const PipelineContext& ctx,
                const std::optional<std::string>& train_filter,
                const std::optional<std::string>& mode_filter) {
  const auto eval_dir = fold_dir(ctx) / "eval";
  require_artifact(eval_dir, "eval");

  std::vector<std::filesystem::path> row_files;
  for (const auto& entry : std::filesystem::directory_iterator(eval_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("row_", 0) == 0 && entry.path().extension() == ".csv") {
      row_files.push_back(entry.path());
    }
  }
  std::sort(row_files.begin(), row_files.end());

  std::vector<ResultRow> rows;
  for (const auto& path : row_files) {
    for (auto& row : parse_table_csv(read_text_file(path, kModule))) {
      if (train_filter && row.train_file_id != *train_filter) continue;
      if (mode_filter && row.test_file_id.rfind(*mode_filter + "_", 0) != 0) {
        continue;
      }
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) {
    throw Error(kModule, "no result rows to report under " + eval_dir.string() +
                             " (run `fairsv eval` first)");
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.test_file_id != b.test_file_id) return a.test_file_id < b.test_file_id;
    return a.train_file_id < b.train_file_id;
  });

  const std::string base = train_filter.value_or("all") + "__" +
                           mode_filter.value_or("all") + "__fold" +
                           std::to_string(ctx.fold);
  write_artifact(ctx, "report", fold_dir(ctx) / "report" / (base + ".csv"),
                 emit_table(rows, TableFormat::kCsv));
  write_artifact(ctx, "report", fold_dir(ctx) / "report" / (base + ".md"),
                 emit_table(rows, TableFormat::kMarkdown));
}

}  // namespace fairsv
