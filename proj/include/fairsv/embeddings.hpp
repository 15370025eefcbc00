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

#ifndef FAIRSV_EMBEDDINGS_HPP_
#define FAIRSV_EMBEDDINGS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fairsv {

enum class EmbeddingSource { kBaseline, kExternal, kSynthetic };

std::string to_string(EmbeddingSource source);

struct Embedding {
  std::vector<double> values;
  EmbeddingSource source = EmbeddingSource::kExternal;

  std::size_t dim() const { return values.size(); }
};

// (speaker, utterance) -> embedding with one dimension across the store.
class EmbeddingStore {
 public:
  using Key = std::pair<std::string, std::string>;

  void insert(const std::string& speaker_id, const std::string& utterance_id,
              Embedding embedding);
  const Embedding& lookup(const std::string& speaker_id,
                          const std::string& utterance_id) const;
  bool contains(const std::string& speaker_id,
                const std::string& utterance_id) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::map<Key, Embedding>& entries() const { return entries_; }

 private:
  std::map<Key, Embedding> entries_;
  std::size_t dim_ = 0;
};

// File rows: speaker_id, utterance_id, e0..e{d-1}; header required.
EmbeddingStore import_embeddings(const std::filesystem::path& path,
                                 char delimiter = ',');
EmbeddingStore parse_embeddings(const std::string& text, char delimiter = ',',
                                EmbeddingSource source = EmbeddingSource::kExternal);
std::string serialize_embeddings(const EmbeddingStore& store,
                                 char delimiter = ',');

}  // namespace fairsv

#endif  // FAIRSV_EMBEDDINGS_HPP_
