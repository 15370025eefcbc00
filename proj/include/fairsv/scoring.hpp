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

#ifndef FAIRSV_SCORING_HPP_
#define FAIRSV_SCORING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairsv/embeddings.hpp"
#include "fairsv/trials.hpp"
#include "fairsv/types.hpp"

namespace fairsv {

struct ScoreRecord {
  std::int64_t pair_id = 0;
  int label = 0;  // 1 genuine, 0 impostor
  double similarity = 0.0;
  GroupKey group;
  std::optional<int> epoch;
};

struct ScoreProvenance {
  std::string train_split_id = "n/a";
  std::string trial_file_id = "n/a";
  std::string embedding_source = "n/a";
};

struct ScoreFile {
  std::vector<ScoreRecord> records;  // trial-file order
  ScoreProvenance provenance;
};

// dot(a, b) / (|a| |b|); rejects zero vectors and dimension mismatches.
double cosine(const Embedding& a, const Embedding& b);

// One record per trial pair, in pair order, labels and groups copied
// through. Every referenced utterance must be present in the store.
ScoreFile score_trials(const TrialFile& trials, const EmbeddingStore& store,
                       std::optional<int> epoch = std::nullopt);

// Columns: pair_id, label, similarity, language, gender, age_bucket,
// epoch (blank when untagged); similarities carry 6 decimals.
std::string serialize_scores(const ScoreFile& file, char delimiter = ',');
ScoreFile parse_scores(const std::string& text, char delimiter = ',');

}  // namespace fairsv

#endif  // FAIRSV_SCORING_HPP_
