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

#include "fairsv/embeddings.hpp"

#include <cmath>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"

namespace fairsv {

namespace {
constexpr const char* kModule = "acoustic";
}

std::string to_string(EmbeddingSource source) {
  switch (source) {
    case EmbeddingSource::kBaseline: return "baseline";
    case EmbeddingSource::kExternal: return "external";
    case EmbeddingSource::kSynthetic: return "synthetic";
  }
  throw Error(kModule, "invalid embedding source value");
}

void EmbeddingStore::insert(const std::string& speaker_id,
                            const std::string& utterance_id,
                            Embedding embedding) {
  if (embedding.values.empty()) {
    throw Error(kModule, "empty embedding for (" + speaker_id + ", " +
                             utterance_id + ")");
  }
  for (double v : embedding.values) {
    if (!std::isfinite(v)) {
      throw Error(kModule, "non-finite embedding value for (" + speaker_id +
                               ", " + utterance_id + ")");
    }
  }
  if (entries_.empty()) {
    dim_ = embedding.dim();
  } else if (embedding.dim() != dim_) {
    throw Error(kModule, "inconsistent embedding dimension for (" + speaker_id +
                             ", " + utterance_id + "): got " +
                             std::to_string(embedding.dim()) + ", store has " +
                             std::to_string(dim_));
  }
  if (!entries_.emplace(Key{speaker_id, utterance_id}, std::move(embedding))
           .second) {
    throw Error(kModule, "duplicate embedding key (" + speaker_id + ", " +
                             utterance_id + ")");
  }
}

const Embedding& EmbeddingStore::lookup(const std::string& speaker_id,
                                        const std::string& utterance_id) const {
  auto it = entries_.find(Key{speaker_id, utterance_id});
  if (it == entries_.end()) {
    throw Error(kModule, "missing embedding for (" + speaker_id + ", " +
                             utterance_id + ")");
  }
  return it->second;
}

bool EmbeddingStore::contains(const std::string& speaker_id,
                              const std::string& utterance_id) const {
  return entries_.count(Key{speaker_id, utterance_id}) != 0;
}

EmbeddingStore parse_embeddings(const std::string& text, char delimiter,
                                EmbeddingSource source) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  if (table.header.size() < 3 || table.header[0] != "speaker_id" ||
      table.header[1] != "utterance_id") {
    throw Error(kModule,
                "embedding header must start with speaker_id, utterance_id "
                "followed by at least one component column");
  }
  const std::size_t dim = table.header.size() - 2;
  EmbeddingStore store;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != dim + 2) {
      throw Error(kModule, "row " + std::to_string(r + 2) + ": expected " +
                               std::to_string(dim) + " components, got " +
                               std::to_string(row.size() >= 2 ? row.size() - 2
                                                              : 0));
    }
    Embedding e;
    e.source = source;
    e.values.reserve(dim);
    for (std::size_t i = 2; i < row.size(); ++i) {
      e.values.push_back(
          parse_double_strict(row[i], kModule, "embedding component"));
    }
    store.insert(row[0], row[1], std::move(e));
  }
  return store;
}

EmbeddingStore import_embeddings(const std::filesystem::path& path,
                                 char delimiter) {
  return parse_embeddings(read_text_file(path, kModule), delimiter,
                          EmbeddingSource::kExternal);
}

std::string serialize_embeddings(const EmbeddingStore& store, char delimiter) {
  std::vector<std::string> header{"speaker_id", "utterance_id"};
  for (std::size_t i = 0; i < store.dim(); ++i) {
    header.push_back("e" + std::to_string(i));
  }
  std::string out = join_fields(header, delimiter, kModule);
  out.push_back('\n');
  for (const auto& [key, embedding] : store.entries()) {
    std::vector<std::string> fields{key.first, key.second};
    for (double v : embedding.values) fields.push_back(format_general(v));
    out += join_fields(fields, delimiter, kModule);
    out.push_back('\n');
  }
  return out;
}

}  // namespace fairsv
