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

#ifndef FAIRSV_SPLITS_HPP_
#define FAIRSV_SPLITS_HPP_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairsv/manifest.hpp"
#include "fairsv/types.hpp"

namespace fairsv {

enum class TrainRecipe { kUserBalanced, kUnbalanced, kUtteranceBalanced };

std::string to_string(TrainRecipe recipe);
TrainRecipe parse_train_recipe(std::string_view token);

struct SplitConfig {
  std::uint64_t seed = 0;
  int test_users_per_group = 25;
  int n_folds = 3;
  int split_age = 40;
};

// Test roster for one fold: the same number of speakers per demographic
// group, sampled without replacement. Groups are kept in canonical key
// order; members keep their sampled order.
struct TestRoster {
  int fold_id = 0;
  std::vector<std::pair<GroupKey, std::vector<std::string>>> members;

  std::size_t size() const;
  bool contains(const std::string& speaker_id) const;
  std::set<std::string> speakers() const;
  std::vector<std::string> languages() const;
  TestRoster for_language(const std::string& language) const;
};

struct TrainItem {
  std::string speaker_id;
  std::string utterance_id;
  GroupKey group;
};

struct TrainSplit {
  TrainRecipe recipe = TrainRecipe::kUnbalanced;
  std::set<std::string> languages;
  std::vector<TrainItem> items;  // sorted by (speaker_id, utterance_id)

  std::set<std::string> speakers() const;
};

// Samples test_users_per_group speakers from every group under a
// fold-derived seed; fails naming any undersized group.
TestRoster select_test_roster(const DatasetIndex& index, const SplitConfig& cfg,
                              int fold);

// Per language: drop roster speakers, then keep min-group-size speakers
// per group (all their utterances).
TrainSplit build_train_user_balanced(const DatasetIndex& index,
                                     const TestRoster& roster,
                                     const SplitConfig& cfg);

// Every utterance of every non-roster speaker.
TrainSplit build_train_unbalanced(const DatasetIndex& index,
                                  const TestRoster& roster);

// Per language: drop roster speakers, then sample min-group-total
// utterances per group.
TrainSplit build_train_utterance_balanced(const DatasetIndex& index,
                                          const TestRoster& roster,
                                          const SplitConfig& cfg);

// Union of same-recipe splits over disjoint language sets. Balanced
// recipes are additionally capped per (gender, bucket) cell at the
// cross-language minimum, keeping the lexicographically first
// speakers/utterances so no extra seed is needed.
TrainSplit merge_language_splits(const std::vector<TrainSplit>& splits);

std::string serialize_split(const TrainSplit& split, char delimiter = ',');
std::vector<TrainItem> parse_split_items(const std::string& text,
                                         char delimiter = ',');

std::string serialize_roster(const TestRoster& roster, char delimiter = ',');
TestRoster parse_roster(const std::string& text, int fold_id,
                        char delimiter = ',');

}  // namespace fairsv

#endif  // FAIRSV_SPLITS_HPP_
