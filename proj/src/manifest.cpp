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

#include "fairsv/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "manifest";

std::string lowercase(std::string_view token) {
  std::string out(token);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Filename stem of a path-like token, used when the manifest has no
// explicit utterance_id column.
std::string path_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

std::string to_string(Gender g) {
  return g == Gender::kFemale ? "female" : "male";
}

std::string to_string(AgeBucket b) {
  return b == AgeBucket::kYoung ? "young" : "old";
}

Gender parse_gender(std::string_view token) {
  std::string t = lowercase(token);
  if (t == "female") return Gender::kFemale;
  if (t == "male") return Gender::kMale;
  throw Error(kModule, "unrecognized gender token '" + std::string(token) +
                           "' (expected female or male)");
}

AgeBucket parse_age_bucket(std::string_view token) {
  std::string t = lowercase(token);
  if (t == "young") return AgeBucket::kYoung;
  if (t == "old") return AgeBucket::kOld;
  throw Error(kModule, "unrecognized age bucket '" + std::string(token) +
                           "' (expected young or old)");
}

std::string GroupKey::label() const {
  return language + "/" + to_string(gender) + "/" + to_string(bucket);
}

const SpeakerRecord& DatasetIndex::speaker(const std::string& speaker_id) const {
  auto it = by_speaker.find(speaker_id);
  if (it == by_speaker.end()) {
    throw Error(kModule, "unknown speaker '" + speaker_id + "'");
  }
  return records[it->second];
}

bool DatasetIndex::contains(const std::string& speaker_id) const {
  return by_speaker.count(speaker_id) != 0;
}

std::vector<std::string> DatasetIndex::languages() const {
  std::set<std::string> langs;
  for (const auto& r : records) langs.insert(r.language);
  return {langs.begin(), langs.end()};
}

std::size_t DatasetIndex::total_utterances() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.utterances.size();
  return n;
}

GroupKey assign_group(const SpeakerRecord& record, int split_age) {
  GroupKey key;
  key.language = record.language;
  key.gender = record.gender;
  key.bucket =
      record.age_years < split_age ? AgeBucket::kYoung : AgeBucket::kOld;
  return key;
}

DatasetIndex build_index(std::vector<SpeakerRecord> records, int split_age) {
  if (split_age <= 0) throw Error(kModule, "split_age must be positive");
  DatasetIndex index;
  index.split_age = split_age;
  index.records = std::move(records);
  for (std::size_t i = 0; i < index.records.size(); ++i) {
    const SpeakerRecord& r = index.records[i];
    if (r.utterances.empty()) {
      throw Error(kModule, "speaker '" + r.speaker_id + "' has no utterances");
    }
    if (!index.by_speaker.emplace(r.speaker_id, i).second) {
      throw Error(kModule, "duplicate speaker id '" + r.speaker_id + "'");
    }
    index.group_index[assign_group(r, split_age)].push_back(r.speaker_id);
  }
  for (auto& [key, ids] : index.group_index) {
    std::sort(ids.begin(), ids.end());
  }
  return index;
}

DatasetIndex merge_indexes(const std::vector<DatasetIndex>& indexes) {
  if (indexes.empty()) throw Error(kModule, "no indexes to merge");
  int split_age = indexes.front().split_age;
  std::vector<SpeakerRecord> records;
  for (const auto& idx : indexes) {
    if (idx.split_age != split_age) {
      throw Error(kModule, "cannot merge indexes built with different split ages");
    }
    records.insert(records.end(), idx.records.begin(), idx.records.end());
  }
  return build_index(std::move(records), split_age);
}

DatasetIndex load_manifest(const std::filesystem::path& manifest_path,
                           const std::string& language,
                           const ManifestOptions& options) {
  if (language.empty()) throw Error(kModule, "language label must be non-empty");
  DelimitedTable table =
      read_delimited_file(manifest_path, options.delimiter, kModule);

  const std::size_t col_speaker = table.column("speaker_id", kModule);
  const std::size_t col_gender = table.column("gender", kModule);
  const std::size_t col_age = table.column("age", kModule);
  const std::size_t col_path = table.column("utterance_path", kModule);
  const auto col_utt = table.find_column("utterance_id");

  std::vector<SpeakerRecord> records;
  std::map<std::string, std::size_t> by_id;
  std::set<std::pair<std::string, std::string>> seen_utts;

  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& fields = table.rows[row];
    // Header is line 1, so data row i is file line i + 2.
    const std::string where = "row " + std::to_string(row + 2);
    const std::size_t needed =
        std::max({col_speaker, col_gender, col_age, col_path,
                  col_utt ? *col_utt : std::size_t{0}});
    if (fields.size() <= needed) {
      throw Error(kModule, where + ": expected at least " +
                               std::to_string(needed + 1) + " fields, got " +
                               std::to_string(fields.size()));
    }

    const std::string& speaker_id = fields[col_speaker];
    if (speaker_id.empty()) throw Error(kModule, where + ": empty speaker_id");

    Gender gender;
    try {
      gender = parse_gender(fields[col_gender]);
    } catch (const Error& e) {
      throw Error(kModule, where + ": " + e.what());
    }

    std::int64_t age;
    try {
      age = parse_int_strict(fields[col_age], kModule, "age");
    } catch (const Error& e) {
      throw Error(kModule, where + ": " + e.what());
    }
    if (age < 0) throw Error(kModule, where + ": negative age " + std::to_string(age));

    const std::string& audio_path = fields[col_path];
    if (audio_path.empty()) throw Error(kModule, where + ": empty utterance_path");
    std::string utterance_id =
        col_utt ? fields[*col_utt] : path_stem(audio_path);
    if (utterance_id.empty()) throw Error(kModule, where + ": empty utterance_id");

    if (!seen_utts.emplace(speaker_id, utterance_id).second) {
      throw Error(kModule, where + ": duplicate utterance '" + utterance_id +
                               "' for speaker '" + speaker_id + "'");
    }

    auto it = by_id.find(speaker_id);
    if (it == by_id.end()) {
      SpeakerRecord record;
      record.speaker_id = speaker_id;
      record.language = language;
      record.gender = gender;
      record.age_years = static_cast<int>(age);
      record.utterances.push_back({utterance_id, audio_path});
      by_id.emplace(speaker_id, records.size());
      records.push_back(std::move(record));
    } else {
      SpeakerRecord& record = records[it->second];
      if (record.gender != gender || record.age_years != static_cast<int>(age)) {
        throw Error(kModule, where + ": speaker '" + speaker_id +
                                 "' has conflicting gender/age across rows");
      }
      record.utterances.push_back({utterance_id, audio_path});
    }
  }

  return build_index(std::move(records), options.split_age);
}

DatasetIndex filter_min_utterances(const DatasetIndex& index,
                                   std::size_t min_count) {
  if (min_count == 0) throw Error(kModule, "min_count must be positive");
  std::vector<SpeakerRecord> kept;
  for (const auto& r : index.records) {
    if (r.utterances.size() >= min_count) kept.push_back(r);
  }
  DatasetIndex out;
  out.split_age = index.split_age;
  if (kept.empty()) return out;
  return build_index(std::move(kept), index.split_age);
}

std::map<GroupKey, std::size_t> group_counts(const DatasetIndex& index) {
  std::map<GroupKey, std::size_t> counts;
  for (const auto& [key, ids] : index.group_index) counts[key] = ids.size();
  return counts;
}

}  // namespace fairsv
