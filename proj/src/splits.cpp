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

#include <algorithm>
#include <map>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"
#include "fairsv/random.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "splits";

void sort_items(std::vector<TrainItem>& items) {
  std::sort(items.begin(), items.end(), [](const TrainItem& a, const TrainItem& b) {
    if (a.speaker_id != b.speaker_id) return a.speaker_id < b.speaker_id;
    return a.utterance_id < b.utterance_id;
  });
}

void append_all_utterances(const SpeakerRecord& record, const GroupKey& group,
                           std::vector<TrainItem>& items) {
  for (const auto& utt : record.utterances) {
    items.push_back({record.speaker_id, utt.utterance_id, group});
  }
}

// Remaining (non-test) speaker ids per group, grouped by language.
std::map<std::string, std::map<GroupKey, std::vector<std::string>>>
remaining_by_language(const DatasetIndex& index, const TestRoster& roster) {
  std::set<std::string> excluded = roster.speakers();
  std::map<std::string, std::map<GroupKey, std::vector<std::string>>> out;
  for (const auto& [group, ids] : index.group_index) {
    auto& kept = out[group.language][group];
    for (const auto& id : ids) {
      if (!excluded.count(id)) kept.push_back(id);
    }
  }
  return out;
}

}  // namespace

std::string to_string(TrainRecipe recipe) {
  switch (recipe) {
    case TrainRecipe::kUserBalanced: return "user_balanced";
    case TrainRecipe::kUnbalanced: return "unbalanced";
    case TrainRecipe::kUtteranceBalanced: return "utterance_balanced";
  }
  throw Error(kModule, "invalid recipe value");
}

TrainRecipe parse_train_recipe(std::string_view token) {
  if (token == "user_balanced") return TrainRecipe::kUserBalanced;
  if (token == "unbalanced") return TrainRecipe::kUnbalanced;
  if (token == "utterance_balanced") return TrainRecipe::kUtteranceBalanced;
  throw Error(kModule, "unrecognized recipe '" + std::string(token) + "'");
}

std::size_t TestRoster::size() const {
  std::size_t n = 0;
  for (const auto& [group, ids] : members) n += ids.size();
  return n;
}

bool TestRoster::contains(const std::string& speaker_id) const {
  for (const auto& [group, ids] : members) {
    if (std::find(ids.begin(), ids.end(), speaker_id) != ids.end()) return true;
  }
  return false;
}

std::set<std::string> TestRoster::speakers() const {
  std::set<std::string> out;
  for (const auto& [group, ids] : members) out.insert(ids.begin(), ids.end());
  return out;
}

std::vector<std::string> TestRoster::languages() const {
  std::set<std::string> langs;
  for (const auto& [group, ids] : members) langs.insert(group.language);
  return {langs.begin(), langs.end()};
}

TestRoster TestRoster::for_language(const std::string& language) const {
  TestRoster out;
  out.fold_id = fold_id;
  for (const auto& [group, ids] : members) {
    if (group.language == language) out.members.emplace_back(group, ids);
  }
  return out;
}

TestRoster select_test_roster(const DatasetIndex& index, const SplitConfig& cfg,
                              int fold) {
  if (cfg.test_users_per_group <= 0) {
    throw Error(kModule, "test_users_per_group must be positive");
  }
  if (fold < 0 || fold >= cfg.n_folds) {
    throw Error(kModule, "fold " + std::to_string(fold) +
                             " out of range for n_folds=" +
                             std::to_string(cfg.n_folds));
  }
  if (cfg.split_age != index.split_age) {
    throw Error(kModule, "config split_age " + std::to_string(cfg.split_age) +
                             " does not match index split_age " +
                             std::to_string(index.split_age));
  }
  if (index.group_index.empty()) throw Error(kModule, "empty dataset index");

  const std::size_t per_group = static_cast<std::size_t>(cfg.test_users_per_group);
  const std::uint64_t fold_seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(fold));

  TestRoster roster;
  roster.fold_id = fold;
  for (const auto& [group, ids] : index.group_index) {
    if (ids.size() < per_group) {
      throw Error(kModule, "group " + group.label() + " has only " +
                               std::to_string(ids.size()) +
                               " speakers, need " + std::to_string(per_group));
    }
    Rng rng(derive_seed(fold_seed, "roster|" + group.label()));
    std::vector<std::string> chosen;
    chosen.reserve(per_group);
    for (std::size_t idx : rng.sample_indices(ids.size(), per_group)) {
      chosen.push_back(ids[idx]);
    }
    roster.members.emplace_back(group, std::move(chosen));
  }
  return roster;
}

TrainSplit build_train_user_balanced(const DatasetIndex& index,
                                     const TestRoster& roster,
                                     const SplitConfig& cfg) {
  TrainSplit split;
  split.recipe = TrainRecipe::kUserBalanced;
  auto by_language = remaining_by_language(index, roster);

  for (const auto& [language, groups] : by_language) {
    std::size_t min_size = SIZE_MAX;
    for (const auto& [group, ids] : groups) {
      if (ids.empty()) {
        throw Error(kModule,
                    "group " + group.label() + " is empty after test exclusion");
      }
      min_size = std::min(min_size, ids.size());
    }
    for (const auto& [group, ids] : groups) {
      Rng rng(derive_seed(
          cfg.seed, "user_balanced|fold" + std::to_string(roster.fold_id) +
                        "|" + group.label()));
      for (std::size_t idx : rng.sample_indices(ids.size(), min_size)) {
        append_all_utterances(index.speaker(ids[idx]), group, split.items);
      }
    }
    split.languages.insert(language);
  }
  sort_items(split.items);
  return split;
}

TrainSplit build_train_unbalanced(const DatasetIndex& index,
                                  const TestRoster& roster) {
  TrainSplit split;
  split.recipe = TrainRecipe::kUnbalanced;
  auto by_language = remaining_by_language(index, roster);
  for (const auto& [language, groups] : by_language) {
    bool any = false;
    for (const auto& [group, ids] : groups) {
      for (const auto& id : ids) {
        append_all_utterances(index.speaker(id), group, split.items);
        any = true;
      }
    }
    if (any) split.languages.insert(language);
  }
  sort_items(split.items);
  return split;
}

TrainSplit build_train_utterance_balanced(const DatasetIndex& index,
                                          const TestRoster& roster,
                                          const SplitConfig& cfg) {
  TrainSplit split;
  split.recipe = TrainRecipe::kUtteranceBalanced;
  auto by_language = remaining_by_language(index, roster);

  for (const auto& [language, groups] : by_language) {
    // Utterance pools per group, in (speaker, utterance) order.
    std::map<GroupKey, std::vector<TrainItem>> pools;
    std::size_t min_pool = SIZE_MAX;
    for (const auto& [group, ids] : groups) {
      auto& pool = pools[group];
      for (const auto& id : ids) {
        append_all_utterances(index.speaker(id), group, pool);
      }
      if (pool.empty()) {
        throw Error(kModule, "group " + group.label() +
                                 " has zero utterances after test exclusion");
      }
      min_pool = std::min(min_pool, pool.size());
    }
    for (const auto& [group, pool] : pools) {
      Rng rng(derive_seed(
          cfg.seed, "utterance_balanced|fold" + std::to_string(roster.fold_id) +
                        "|" + group.label()));
      for (std::size_t idx : rng.sample_indices(pool.size(), min_pool)) {
        split.items.push_back(pool[idx]);
      }
    }
    split.languages.insert(language);
  }
  sort_items(split.items);
  return split;
}

std::set<std::string> TrainSplit::speakers() const {
  std::set<std::string> out;
  for (const auto& item : items) out.insert(item.speaker_id);
  return out;
}

TrainSplit merge_language_splits(const std::vector<TrainSplit>& splits) {
  if (splits.empty()) throw Error(kModule, "nothing to merge");
  const TrainRecipe recipe = splits.front().recipe;
  TrainSplit merged;
  merged.recipe = recipe;
  for (const auto& split : splits) {
    if (split.recipe != recipe) {
      throw Error(kModule, "cannot merge splits with mixed recipes (" +
                               to_string(recipe) + " vs " +
                               to_string(split.recipe) + ")");
    }
    for (const auto& lang : split.languages) {
      if (!merged.languages.insert(lang).second) {
        throw Error(kModule,
                    "language '" + lang + "' appears in more than one split");
      }
    }
    merged.items.insert(merged.items.end(), split.items.begin(),
                        split.items.end());
  }
  sort_items(merged.items);
  if (recipe == TrainRecipe::kUnbalanced || merged.languages.size() < 2) {
    return merged;
  }

  // Cross-language equalization: cap every language's contribution to a
  // (gender, bucket) cell at the smallest contribution any language makes
  // to that cell.
  using Cell = std::pair<Gender, AgeBucket>;
  std::map<Cell, std::map<std::string, std::size_t>> counts;  // cell -> lang -> n
  const bool per_speaker = recipe == TrainRecipe::kUserBalanced;
  std::map<std::string, std::set<std::string>> speakers_seen;  // lang scoping
  for (const auto& item : merged.items) {
    Cell cell{item.group.gender, item.group.bucket};
    if (per_speaker) {
      if (speakers_seen[item.group.language].insert(item.speaker_id).second) {
        counts[cell][item.group.language]++;
      }
    } else {
      counts[cell][item.group.language]++;
    }
  }
  std::map<Cell, std::size_t> caps;
  for (const auto& [cell, by_lang] : counts) {
    std::size_t cap = SIZE_MAX;
    for (const auto& lang : merged.languages) {
      auto it = by_lang.find(lang);
      cap = std::min(cap, it == by_lang.end() ? std::size_t{0} : it->second);
    }
    caps[cell] = cap;
  }

  // Items are already sorted, so "first k" is deterministic.
  std::vector<TrainItem> capped;
  std::map<Cell, std::map<std::string, std::size_t>> used;
  std::map<std::string, std::set<std::string>> kept_speakers;
  for (const auto& item : merged.items) {
    Cell cell{item.group.gender, item.group.bucket};
    auto& used_count = used[cell][item.group.language];
    if (per_speaker) {
      auto& kept = kept_speakers[item.group.language];
      bool already = kept.count(item.speaker_id) != 0;
      if (!already && used_count >= caps[cell]) continue;
      if (!already) {
        kept.insert(item.speaker_id);
        ++used_count;
      }
      capped.push_back(item);
    } else {
      if (used_count >= caps[cell]) continue;
      ++used_count;
      capped.push_back(item);
    }
  }
  merged.items = std::move(capped);
  return merged;
}

std::string serialize_split(const TrainSplit& split, char delimiter) {
  std::string out = join_fields(
      {"speaker_id", "utterance_id", "language", "gender", "age_bucket"},
      delimiter, kModule);
  out.push_back('\n');
  for (const auto& item : split.items) {
    out += join_fields({item.speaker_id, item.utterance_id,
                        item.group.language, to_string(item.group.gender),
                        to_string(item.group.bucket)},
                       delimiter, kModule);
    out.push_back('\n');
  }
  return out;
}

std::vector<TrainItem> parse_split_items(const std::string& text,
                                         char delimiter) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  const std::size_t c_spk = table.column("speaker_id", kModule);
  const std::size_t c_utt = table.column("utterance_id", kModule);
  const std::size_t c_lang = table.column("language", kModule);
  const std::size_t c_gender = table.column("gender", kModule);
  const std::size_t c_bucket = table.column("age_bucket", kModule);
  std::vector<TrainItem> items;
  for (const auto& row : table.rows) {
    TrainItem item;
    item.speaker_id = row.at(c_spk);
    item.utterance_id = row.at(c_utt);
    item.group.language = row.at(c_lang);
    item.group.gender = parse_gender(row.at(c_gender));
    item.group.bucket = parse_age_bucket(row.at(c_bucket));
    items.push_back(std::move(item));
  }
  return items;
}

std::string serialize_roster(const TestRoster& roster, char delimiter) {
  std::string out = join_fields(
      {"speaker_id", "language", "gender", "age_bucket"}, delimiter, kModule);
  out.push_back('\n');
  for (const auto& [group, ids] : roster.members) {
    for (const auto& id : ids) {
      out += join_fields({id, group.language, to_string(group.gender),
                          to_string(group.bucket)},
                         delimiter, kModule);
      out.push_back('\n');
    }
  }
  return out;
}

TestRoster parse_roster(const std::string& text, int fold_id, char delimiter) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  const std::size_t c_spk = table.column("speaker_id", kModule);
  const std::size_t c_lang = table.column("language", kModule);
  const std::size_t c_gender = table.column("gender", kModule);
  const std::size_t c_bucket = table.column("age_bucket", kModule);
  TestRoster roster;
  roster.fold_id = fold_id;
  std::map<GroupKey, std::size_t> slot;
  for (const auto& row : table.rows) {
    GroupKey group{row.at(c_lang), parse_gender(row.at(c_gender)),
                   parse_age_bucket(row.at(c_bucket))};
    auto it = slot.find(group);
    if (it == slot.end()) {
      slot.emplace(group, roster.members.size());
      roster.members.emplace_back(group, std::vector<std::string>{});
      it = slot.find(group);
    }
    roster.members[it->second].second.push_back(row.at(c_spk));
  }
  std::sort(roster.members.begin(), roster.members.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return roster;
}

}  // namespace fairsv
