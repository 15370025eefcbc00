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

#include <doctest.h>

#include <fstream>
#include <string>

#include "fairsv/error.hpp"
#include "support/fixtures.hpp"

using namespace fairsv;
using fairsv::testing::TempDir;

namespace {

std::filesystem::path write_manifest(const TempDir& dir,
                                     const std::string& content,
                                     const char* name = "manifest.csv") {
  auto path = dir.path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("two rows make one speaker with two utterances") {
  TempDir dir;
  auto path = write_manifest(dir,
                             "speaker_id,gender,age,utterance_path\n"
                             "spk1,female,34,spk1/a.wav\n"
                             "spk1,female,34,spk1/b.wav\n");
  DatasetIndex index = load_manifest(path, "english");
  CHECK(index.records.size() == 1);
  CHECK(index.records[0].utterances.size() == 2);
  CHECK(index.records[0].utterances[0].utterance_id == "a");
  CHECK(index.records[0].utterances[1].utterance_id == "b");
  CHECK(index.records[0].language == "english");
}

TEST_CASE("unknown gender token fails with the row number") {
  TempDir dir;
  auto path = write_manifest(dir,
                             "speaker_id,gender,age,utterance_path\n"
                             "spk1,female,34,a.wav\n"
                             "spk2,unknown,40,b.wav\n");
  CHECK_THROWS_WITH_AS(load_manifest(path, "english"),
                       doctest::Contains("row 3"), Error);
}

TEST_CASE("three speakers with five utterances are fully indexed") {
  TempDir dir;
  std::string content = "speaker_id,gender,age,utterance_path\n";
  const char* speakers[] = {"s1", "s2", "s3"};
  const char* genders[] = {"female", "male", "female"};
  const int ages[] = {30, 50, 61};
  for (int s = 0; s < 3; ++s) {
    for (int u = 0; u < 5; ++u) {
      content += std::string(speakers[s]) + "," + genders[s] + "," +
                 std::to_string(ages[s]) + "," + speakers[s] + "/u" +
                 std::to_string(u) + ".wav\n";
    }
  }
  DatasetIndex index = load_manifest(write_manifest(dir, content), "english");
  CHECK(index.records.size() == 3);
  CHECK(index.total_utterances() == 15);

  std::size_t grouped = 0;
  for (const auto& [group, ids] : index.group_index) grouped += ids.size();
  CHECK(grouped == 3);
  CHECK(index.group_index.at({"english", Gender::kFemale, AgeBucket::kYoung})
            .size() == 1);
  CHECK(index.group_index.at({"english", Gender::kMale, AgeBucket::kOld})
            .size() == 1);
  CHECK(index.group_index.at({"english", Gender::kFemale, AgeBucket::kOld})
            .size() == 1);
}

TEST_CASE("missing required column is named") {
  TempDir dir;
  auto path = write_manifest(dir, "speaker_id,age,utterance_path\ns,30,a.wav\n");
  CHECK_THROWS_WITH_AS(load_manifest(path, "english"),
                       doctest::Contains("gender"), Error);
}

TEST_CASE("duplicate utterance for a speaker is rejected") {
  TempDir dir;
  auto path = write_manifest(dir,
                             "speaker_id,gender,age,utterance_path\n"
                             "s,female,30,s/a.wav\n"
                             "s,female,30,s/a.wav\n");
  CHECK_THROWS_WITH_AS(load_manifest(path, "english"),
                       doctest::Contains("duplicate"), Error);
}

TEST_CASE("unparsable age names the row") {
  TempDir dir;
  auto path = write_manifest(dir,
                             "speaker_id,gender,age,utterance_path\n"
                             "s,female,thirty,a.wav\n");
  CHECK_THROWS_WITH_AS(load_manifest(path, "english"),
                       doctest::Contains("row 2"), Error);
}

TEST_CASE("explicit utterance_id column and extra columns are honored") {
  TempDir dir;
  auto path = write_manifest(dir,
                             "speaker_id,gender,age,utterance_id,utterance_path,notes\n"
                             "s,male,45,clip7,s/a.wav,ignored\n"
                             "s,male,45,clip9,s/b.wav,ignored\n");
  DatasetIndex index = load_manifest(path, "spanish");
  CHECK(index.records[0].utterances[0].utterance_id == "clip7");
  CHECK(index.records[0].utterances[1].utterance_id == "clip9");
}

TEST_CASE("alternate delimiter is supported") {
  TempDir dir;
  auto path = write_manifest(dir,
                             "speaker_id\tgender\tage\tutterance_path\n"
                             "s\tfemale\t30\ta.wav\n"
                             "s\tfemale\t30\tb.wav\n");
  ManifestOptions options;
  options.delimiter = '\t';
  DatasetIndex index = load_manifest(path, "english", options);
  CHECK(index.records.size() == 1);
}

TEST_CASE("min-utterance filter keeps exactly the eligible speakers") {
  std::vector<SpeakerRecord> records;
  records.push_back(testing::make_speaker("four", "english", Gender::kFemale, 30, 4));
  records.push_back(testing::make_speaker("five", "english", Gender::kFemale, 30, 5));
  records.push_back(testing::make_speaker("nine", "english", Gender::kMale, 50, 9));
  DatasetIndex index = build_index(std::move(records), 40);

  DatasetIndex filtered = filter_min_utterances(index, 5);
  CHECK(filtered.records.size() == 2);
  CHECK(filtered.contains("five"));
  CHECK(filtered.contains("nine"));
  CHECK_FALSE(filtered.contains("four"));

  // Property: kept speakers have >= k, dropped have < k, for several k.
  for (std::size_t k = 1; k <= 10; ++k) {
    DatasetIndex out = filter_min_utterances(index, k);
    for (const auto& r : index.records) {
      if (r.utterances.size() >= k) {
        CHECK(out.contains(r.speaker_id));
      } else {
        CHECK_FALSE(out.contains(r.speaker_id));
      }
    }
  }

  DatasetIndex empty;
  CHECK(filter_min_utterances(empty, 5).records.empty());
}

TEST_CASE("age bucketing: below, at and above the boundary") {
  auto rec = testing::make_speaker("s", "english", Gender::kFemale, 39, 5);
  CHECK(assign_group(rec).bucket == AgeBucket::kYoung);

  rec.age_years = 40;  // the boundary itself lands old
  CHECK(assign_group(rec).bucket == AgeBucket::kOld);

  rec.gender = Gender::kMale;
  rec.age_years = 63;
  GroupKey key = assign_group(rec);
  CHECK(key.bucket == AgeBucket::kOld);
  CHECK(key.gender == Gender::kMale);
  CHECK(key.language == "english");

  rec.age_years = 45;
  CHECK(assign_group(rec, 50).bucket == AgeBucket::kYoung);
}

TEST_CASE("group counts sum to the speaker count and rebuild consistently") {
  testing::CellCounts counts;
  counts.young_female = 3;
  counts.old_female = 2;
  counts.young_male = 4;
  counts.old_male = 1;
  DatasetIndex index = testing::make_cell_index("english", counts);

  auto by_group = group_counts(index);
  std::size_t total = 0;
  for (const auto& [group, n] : by_group) total += n;
  CHECK(total == index.records.size());
  CHECK(by_group.at({"english", Gender::kFemale, AgeBucket::kYoung}) == 3);
  CHECK(by_group.at({"english", Gender::kMale, AgeBucket::kOld}) == 1);

  // group_index must equal a from-scratch rebuild off the records.
  std::map<GroupKey, std::vector<std::string>> rebuilt;
  for (const auto& r : index.records) {
    rebuilt[assign_group(r, index.split_age)].push_back(r.speaker_id);
  }
  for (auto& [group, ids] : rebuilt) std::sort(ids.begin(), ids.end());
  CHECK(rebuilt == index.group_index);

  DatasetIndex empty;
  CHECK(group_counts(empty).empty());
}

TEST_CASE("empty file and negative age are rejected") {
  TempDir dir;
  CHECK_THROWS_AS(load_manifest(write_manifest(dir, ""), "english"), Error);
  auto path = write_manifest(dir,
                             "speaker_id,gender,age,utterance_path\n"
                             "s,female,-3,a.wav\n",
                             "neg.csv");
  CHECK_THROWS_WITH_AS(load_manifest(path, "english"),
                       doctest::Contains("negative age"), Error);
}
