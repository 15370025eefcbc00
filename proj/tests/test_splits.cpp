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

#include "fairsv/splits.hpp"

#include <doctest.h>

#include <map>

#include "fairsv/error.hpp"
#include "support/fixtures.hpp"

using namespace fairsv;
using fairsv::testing::CellCounts;
using fairsv::testing::make_cell_index;

namespace {

SplitConfig config(std::uint64_t seed = 11, int per_group = 25) {
  SplitConfig cfg;
  cfg.seed = seed;
  cfg.test_users_per_group = per_group;
  return cfg;
}

// Speaker counts per group within a split.
std::map<GroupKey, std::size_t> split_speaker_counts(const TrainSplit& split) {
  std::map<GroupKey, std::set<std::string>> seen;
  for (const auto& item : split.items) seen[item.group].insert(item.speaker_id);
  std::map<GroupKey, std::size_t> counts;
  for (const auto& [group, ids] : seen) counts[group] = ids.size();
  return counts;
}

std::map<GroupKey, std::size_t> split_utterance_counts(const TrainSplit& split) {
  std::map<GroupKey, std::size_t> counts;
  for (const auto& item : split.items) counts[item.group]++;
  return counts;
}

// The worked per-language fixture: cell sizes mirroring an unevenly
// represented corpus (young females scarcest at 180).
DatasetIndex uneven_index(const std::string& language = "spanish") {
  CellCounts counts;
  counts.old_female = 306;
  counts.young_female = 180;
  counts.old_male = 376;
  counts.young_male = 418;
  return make_cell_index(language, counts);
}

}  // namespace

TEST_CASE("roster takes the configured number per group") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 30;
  DatasetIndex index = make_cell_index("english", counts);
  TestRoster roster = select_test_roster(index, config(), 0);
  CHECK(roster.size() == 100);
  for (const auto& [group, ids] : roster.members) CHECK(ids.size() == 25);

  // No duplicates across groups.
  CHECK(roster.speakers().size() == 100);
}

TEST_CASE("undersized group fails naming the group and its size") {
  CellCounts counts;
  counts.young_female = 10;
  counts.old_female = counts.young_male = counts.old_male = 30;
  DatasetIndex index = make_cell_index("english", counts);
  CHECK_THROWS_WITH_AS(select_test_roster(index, config(), 0),
                       doctest::Contains("english/female/young"), Error);
  CHECK_THROWS_WITH_AS(select_test_roster(index, config(), 0),
                       doctest::Contains("10"), Error);
}

TEST_CASE("roster selection is deterministic per (seed, fold)") {
  DatasetIndex index = uneven_index();
  TestRoster a = select_test_roster(index, config(77), 1);
  TestRoster b = select_test_roster(index, config(77), 1);
  CHECK(serialize_roster(a) == serialize_roster(b));

  TestRoster other_fold = select_test_roster(index, config(77), 2);
  CHECK(serialize_roster(a) != serialize_roster(other_fold));
  TestRoster other_seed = select_test_roster(index, config(78), 1);
  CHECK(serialize_roster(a) != serialize_roster(other_seed));
}

TEST_CASE("user-balanced split keeps the minimum group size per language") {
  DatasetIndex index = uneven_index();
  TestRoster empty_roster;

  TrainSplit split = build_train_user_balanced(index, empty_roster, config());
  auto counts = split_speaker_counts(split);
  CHECK(counts.size() == 4);
  for (const auto& [group, n] : counts) CHECK(n == 180);
  CHECK(split.speakers().size() == 720);

  // After removing a 25-per-group roster the remaining sizes are
  // {281, 155, 351, 393}; the min rule keeps 155 everywhere.
  TestRoster roster = select_test_roster(index, config(), 0);
  TrainSplit after = build_train_user_balanced(index, roster, config());
  for (const auto& [group, n] : split_speaker_counts(after)) CHECK(n == 155);
  CHECK(after.speakers().size() == 4 * 155);
}

TEST_CASE("equal-sized groups are fully retained by the user-balanced rule") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 12;
  DatasetIndex index = make_cell_index("english", counts);
  TrainSplit split = build_train_user_balanced(index, TestRoster{}, config());
  for (const auto& [group, n] : split_speaker_counts(split)) CHECK(n == 12);
}

TEST_CASE("unbalanced split is the set difference") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 5;
  DatasetIndex index = make_cell_index("english", counts, 6);

  SUBCASE("empty roster keeps the entire index") {
    TrainSplit split = build_train_unbalanced(index, TestRoster{});
    CHECK(split.speakers().size() == 20);
    CHECK(split.items.size() == index.total_utterances());
  }
  SUBCASE("roster speakers are excluded") {
    TestRoster roster = select_test_roster(index, config(3, 1), 0);
    TrainSplit split = build_train_unbalanced(index, roster);
    CHECK(split.speakers().size() == 16);
    for (const auto& id : roster.speakers()) {
      CHECK_FALSE(split.speakers().count(id));
    }
  }
  SUBCASE("roster covering everyone leaves an empty split") {
    TestRoster roster = select_test_roster(index, config(3, 5), 0);
    TrainSplit split = build_train_unbalanced(index, roster);
    CHECK(split.items.empty());
  }
}

TEST_CASE("utterance-balanced split equalizes utterance counts") {
  // 10 speakers per cell with 2/4/6/8 utterances each -> cell totals
  // {20, 40, 60, 80}; the min rule keeps 20 per cell.
  std::vector<SpeakerRecord> records;
  int serial = 0;
  auto add_cell = [&](Gender g, int age, int utts) {
    for (int i = 0; i < 10; ++i) {
      records.push_back(testing::make_speaker(
          "s" + std::to_string(serial++), "english", g, age, utts));
    }
  };
  add_cell(Gender::kFemale, 30, 2);
  add_cell(Gender::kFemale, 50, 4);
  add_cell(Gender::kMale, 30, 6);
  add_cell(Gender::kMale, 50, 8);
  DatasetIndex index = build_index(std::move(records), 40);

  TrainSplit split =
      build_train_utterance_balanced(index, TestRoster{}, config());
  auto counts = split_utterance_counts(split);
  CHECK(counts.size() == 4);
  for (const auto& [group, n] : counts) CHECK(n == 20);
  CHECK(split.items.size() == 80);

  TrainSplit again =
      build_train_utterance_balanced(index, TestRoster{}, config());
  CHECK(serialize_split(split) == serialize_split(again));
}

TEST_CASE("all-equal utterance pools are fully retained") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 3;
  DatasetIndex index = make_cell_index("english", counts, 5);
  TrainSplit split =
      build_train_utterance_balanced(index, TestRoster{}, config());
  for (const auto& [group, n] : split_utterance_counts(split)) CHECK(n == 15);
}

TEST_CASE("train splits never contain roster speakers") {
  DatasetIndex index = uneven_index();
  TestRoster roster = select_test_roster(index, config(5), 0);
  const auto test_speakers = roster.speakers();

  for (const TrainSplit& split :
       {build_train_user_balanced(index, roster, config(5)),
        build_train_unbalanced(index, roster),
        build_train_utterance_balanced(index, roster, config(5))}) {
    for (const auto& id : split.speakers()) {
      CHECK_FALSE(test_speakers.count(id));
    }
  }
}

TEST_CASE("merging disjoint language splits unions them") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 8;
  DatasetIndex english = make_cell_index("english", counts);
  DatasetIndex spanish = make_cell_index("spanish", counts);

  TrainSplit a = build_train_user_balanced(english, TestRoster{}, config());
  TrainSplit b = build_train_user_balanced(spanish, TestRoster{}, config());
  TrainSplit merged = merge_language_splits({a, b});
  CHECK(merged.languages == std::set<std::string>{"english", "spanish"});
  CHECK(merged.speakers().size() == 64);
  CHECK(merged.items.size() == a.items.size() + b.items.size());
}

TEST_CASE("merging a single split is the identity") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 4;
  DatasetIndex index = make_cell_index("english", counts);
  TrainSplit split = build_train_user_balanced(index, TestRoster{}, config());
  TrainSplit merged = merge_language_splits({split});
  CHECK(serialize_split(merged) == serialize_split(split));
}

TEST_CASE("merge rejects mixed recipes and overlapping languages") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 4;
  DatasetIndex english = make_cell_index("english", counts);
  DatasetIndex spanish = make_cell_index("spanish", counts);

  TrainSplit a = build_train_user_balanced(english, TestRoster{}, config());
  TrainSplit b = build_train_unbalanced(spanish, TestRoster{});
  CHECK_THROWS_WITH_AS(merge_language_splits({a, b}),
                       doctest::Contains("mixed recipes"), Error);

  TrainSplit c = build_train_user_balanced(english, TestRoster{}, config(9));
  CHECK_THROWS_WITH_AS(merge_language_splits({a, c}),
                       doctest::Contains("more than one split"), Error);
}

TEST_CASE("cross-language merge caps balanced cells at the smaller language") {
  CellCounts big;
  big.young_female = big.old_female = big.young_male = big.old_male = 10;
  CellCounts small;
  small.young_female = small.old_female = small.young_male = small.old_male = 6;
  DatasetIndex english = make_cell_index("english", big);
  DatasetIndex spanish = make_cell_index("spanish", small);

  TrainSplit merged = merge_language_splits(
      {build_train_user_balanced(english, TestRoster{}, config()),
       build_train_user_balanced(spanish, TestRoster{}, config())});
  auto counts = split_speaker_counts(merged);
  CHECK(counts.size() == 8);
  for (const auto& [group, n] : counts) CHECK(n == 6);

  // Unbalanced merges are a plain union: no capping.
  TrainSplit unbalanced = merge_language_splits(
      {build_train_unbalanced(english, TestRoster{}),
       build_train_unbalanced(spanish, TestRoster{})});
  auto raw = split_speaker_counts(unbalanced);
  std::size_t total = 0;
  for (const auto& [group, n] : raw) total += n;
  CHECK(total == 40 + 24);
}

TEST_CASE("split serialization is sorted, stable and parseable") {
  DatasetIndex index = uneven_index("english");
  TestRoster roster = select_test_roster(index, config(2), 0);
  TrainSplit split = build_train_user_balanced(index, roster, config(2));

  const std::string text = serialize_split(split);
  CHECK(text == serialize_split(build_train_user_balanced(index, roster, config(2))));

  auto items = parse_split_items(text);
  REQUIRE(items.size() == split.items.size());
  for (std::size_t i = 1; i < items.size(); ++i) {
    const bool ordered =
        items[i - 1].speaker_id < items[i].speaker_id ||
        (items[i - 1].speaker_id == items[i].speaker_id &&
         items[i - 1].utterance_id < items[i].utterance_id);
    CHECK(ordered);
  }
}

TEST_CASE("roster serialization round-trips including member order") {
  DatasetIndex index = uneven_index("english");
  TestRoster roster = select_test_roster(index, config(21), 2);
  TestRoster parsed = parse_roster(serialize_roster(roster), 2);
  CHECK(parsed.fold_id == 2);
  REQUIRE(parsed.members.size() == roster.members.size());
  for (std::size_t g = 0; g < roster.members.size(); ++g) {
    CHECK(parsed.members[g].first == roster.members[g].first);
    CHECK(parsed.members[g].second == roster.members[g].second);
  }
}

TEST_CASE("config split_age must match the index") {
  DatasetIndex index = uneven_index();
  SplitConfig cfg = config();
  cfg.split_age = 35;
  CHECK_THROWS_WITH_AS(select_test_roster(index, cfg, 0),
                       doctest::Contains("split_age"), Error);
}
