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

#include "fairsv/scoring.hpp"

#include <cmath>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"

namespace fairsv {

namespace {
constexpr const char* kModule = "scoring";
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw Error(kModule, "embedding dimension mismatch: " +
                             std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
  }
  if (a.dim() == 0) throw Error(kModule, "empty embeddings");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) {
    // A zero-norm embedding signals an upstream extraction fault.
    throw Error(kModule, "zero-norm embedding in cosine similarity");
  }
  double value = dot / (std::sqrt(na) * std::sqrt(nb));
  if (value > 1.0) value = 1.0;
  if (value < -1.0) value = -1.0;
  return value;
}

ScoreFile score_trials(const TrialFile& trials, const EmbeddingStore& store,
                       std::optional<int> epoch) {
  ScoreFile file;
  file.provenance.trial_file_id =
      to_string(trials.mode) + "|" + trials.language + "|fold" +
      std::to_string(trials.fold_id);
  file.provenance.embedding_source =
      store.empty() ? "empty"
                    : to_string(store.entries().begin()->second.source);
  file.records.reserve(trials.pairs.size());
  for (const auto& pair : trials.pairs) {
    if (!store.contains(pair.enroll_speaker, pair.enroll_utt)) {
      throw Error(kModule, "missing embedding for (" + pair.enroll_speaker +
                               ", " + pair.enroll_utt + ")");
    }
    if (!store.contains(pair.probe_speaker, pair.probe_utt)) {
      throw Error(kModule, "missing embedding for (" + pair.probe_speaker +
                               ", " + pair.probe_utt + ")");
    }
    ScoreRecord record;
    record.pair_id = pair.pair_id;
    record.label = pair.label;
    record.similarity =
        cosine(store.lookup(pair.enroll_speaker, pair.enroll_utt),
               store.lookup(pair.probe_speaker, pair.probe_utt));
    record.group = pair.group;
    record.epoch = epoch;
    file.records.push_back(std::move(record));
  }
  return file;
}

std::string serialize_scores(const ScoreFile& file, char delimiter) {
  std::string out = join_fields({"pair_id", "label", "similarity", "language",
                                 "gender", "age_bucket", "epoch"},
                                delimiter, kModule);
  out.push_back('\n');
  for (const auto& r : file.records) {
    out += join_fields(
        {std::to_string(r.pair_id), std::to_string(r.label),
         format_fixed(r.similarity, 6), r.group.language,
         to_string(r.group.gender), to_string(r.group.bucket),
         r.epoch ? std::to_string(*r.epoch) : std::string()},
        delimiter, kModule);
    out.push_back('\n');
  }
  return out;
}

ScoreFile parse_scores(const std::string& text, char delimiter) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  const std::size_t c_id = table.column("pair_id", kModule);
  const std::size_t c_label = table.column("label", kModule);
  const std::size_t c_sim = table.column("similarity", kModule);
  const std::size_t c_lang = table.column("language", kModule);
  const std::size_t c_gender = table.column("gender", kModule);
  const std::size_t c_bucket = table.column("age_bucket", kModule);
  const auto c_epoch = table.find_column("epoch");

  ScoreFile file;
  for (const auto& row : table.rows) {
    ScoreRecord r;
    r.pair_id = parse_int_strict(row.at(c_id), kModule, "pair_id");
    r.label =
        static_cast<int>(parse_int_strict(row.at(c_label), kModule, "label"));
    if (r.label != 0 && r.label != 1) {
      throw Error(kModule, "label must be 0 or 1, got " +
                               std::to_string(r.label));
    }
    r.similarity = parse_double_strict(row.at(c_sim), kModule, "similarity");
    if (!std::isfinite(r.similarity) || r.similarity < -1.0 - 1e-9 ||
        r.similarity > 1.0 + 1e-9) {
      throw Error(kModule, "similarity out of [-1, 1]: " + row.at(c_sim));
    }
    r.group.language = row.at(c_lang);
    r.group.gender = parse_gender(row.at(c_gender));
    r.group.bucket = parse_age_bucket(row.at(c_bucket));
    if (c_epoch && !row.at(*c_epoch).empty()) {
      r.epoch = static_cast<int>(
          parse_int_strict(row.at(*c_epoch), kModule, "epoch"));
    }
    file.records.push_back(std::move(r));
  }
  return file;
}

}  // namespace fairsv
