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

#ifndef FAIRSV_MANIFEST_HPP_
#define FAIRSV_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fairsv/types.hpp"

namespace fairsv {

// Index over one or more ingested manifests. Immutable once built; the
// group index partitions speakers into (language, gender, age-bucket)
// cells using the split age it was built with.
struct DatasetIndex {
  std::vector<SpeakerRecord> records;  // manifest order
  std::map<std::string, std::size_t> by_speaker;            // id -> records idx
  std::map<GroupKey, std::vector<std::string>> group_index; // ids sorted
  int split_age = 40;

  const SpeakerRecord& speaker(const std::string& speaker_id) const;
  bool contains(const std::string& speaker_id) const;
  std::vector<std::string> languages() const;
  std::size_t total_utterances() const;
};

struct ManifestOptions {
  char delimiter = ',';
  int split_age = 40;
};

// Manifest schema: header row; required columns speaker_id, gender, age,
// utterance_path; optional utterance_id (defaults to the wav filename
// stem); one row per utterance; extra columns ignored.
DatasetIndex load_manifest(const std::filesystem::path& manifest_path,
                           const std::string& language,
                           const ManifestOptions& options = {});

// Rebuilds an index from already-validated records (also used to merge
// per-language indexes before roster selection).
DatasetIndex build_index(std::vector<SpeakerRecord> records, int split_age);

DatasetIndex merge_indexes(const std::vector<DatasetIndex>& indexes);

// Keeps exactly the speakers with at least `min_count` utterances.
DatasetIndex filter_min_utterances(const DatasetIndex& index,
                                   std::size_t min_count = 5);

// young iff age < split_age; age == split_age lands in "old".
GroupKey assign_group(const SpeakerRecord& record, int split_age = 40);

// Speakers per demographic group.
std::map<GroupKey, std::size_t> group_counts(const DatasetIndex& index);

}  // namespace fairsv

#endif  // FAIRSV_MANIFEST_HPP_
