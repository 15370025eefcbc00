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

#include "fairsv/trials.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"
#include "fairsv/random.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "trials";

// Unordered distinct pair (i, j) with i < j from a flat pair index.
std::pair<std::size_t, std::size_t> decode_pair(std::size_t flat,
                                                std::size_t n) {
  // Row-major over the strict upper triangle.
  std::size_t i = 0;
  std::size_t row_len = n - 1;
  while (flat >= row_len) {
    flat -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + 1 + flat};
}

bool partner_eligible(TestMode mode, const GroupKey& current,
                      const GroupKey& candidate) {
  switch (mode) {
    case TestMode::kSameAge: return candidate.bucket == current.bucket;
    case TestMode::kSameGender: return candidate.gender == current.gender;
    case TestMode::kRandom: return true;
  }
  return false;
}

}  // namespace

std::string to_string(TestMode mode) {
  switch (mode) {
    case TestMode::kSameAge: return "same_age";
    case TestMode::kSameGender: return "same_gender";
    case TestMode::kRandom: return "random";
  }
  throw Error(kModule, "invalid mode value");
}

TestMode parse_test_mode(std::string_view token) {
  if (token == "same_age") return TestMode::kSameAge;
  if (token == "same_gender") return TestMode::kSameGender;
  if (token == "random") return TestMode::kRandom;
  throw Error(kModule, "unrecognized test mode '" + std::string(token) + "'");
}

TrialFile gen_trials(const TestRoster& roster, const DatasetIndex& index,
                     TestMode mode, int n_same, int n_diff,
                     std::uint64_t seed) {
  if (n_same <= 0 || n_diff <= 0) {
    throw Error(kModule, "n_same and n_diff must be positive");
  }
  auto langs = roster.languages();
  if (langs.empty()) throw Error(kModule, "empty roster");
  if (langs.size() > 1) {
    throw Error(kModule,
                "roster spans multiple languages; generate per language");
  }

  // Roster order: canonical group order, sampled member order.
  struct Member {
    const std::string* id;
    const GroupKey* group;
  };
  std::vector<Member> order;
  for (const auto& [group, ids] : roster.members) {
    for (const auto& id : ids) order.push_back({&id, &group});
  }

  TrialFile file;
  file.mode = mode;
  file.fold_id = roster.fold_id;
  file.language = langs.front();
  file.n_same = n_same;
  file.n_diff = n_diff;
  file.pairs.reserve(order.size() * static_cast<std::size_t>(n_same + n_diff));

  std::int64_t pair_id = 0;
  for (const auto& member : order) {
    const SpeakerRecord& speaker = index.speaker(*member.id);
    const auto& utts = speaker.utterances;
    const std::size_t n_utts = utts.size();
    if (n_utts < 2) {
      throw Error(kModule, "speaker '" + speaker.speaker_id +
                               "' has fewer than 2 utterances");
    }

    std::vector<const Member*> partners;
    for (const auto& other : order) {
      if (*other.id == *member.id) continue;
      if (partner_eligible(mode, *member.group, *other.group)) {
        partners.push_back(&other);
      }
    }
    if (partners.empty()) {
      throw Error(kModule, "speaker '" + speaker.speaker_id +
                               "' has no eligible partner under mode " +
                               to_string(mode));
    }

    Rng rng(derive_seed(seed, "trials|" + to_string(mode) + "|" +
                                  speaker.speaker_id));

    // Genuine pairs over the strict upper triangle of utterance indexes.
    const std::size_t distinct = n_utts * (n_utts - 1) / 2;
    std::vector<std::size_t> flat_choices;
    if (distinct >= static_cast<std::size_t>(n_same)) {
      flat_choices =
          rng.sample_indices(distinct, static_cast<std::size_t>(n_same));
    } else {
      flat_choices.reserve(static_cast<std::size_t>(n_same));
      for (int k = 0; k < n_same; ++k) {
        flat_choices.push_back(rng.uniform_below(distinct));
      }
    }
    for (std::size_t flat : flat_choices) {
      auto [i, j] = decode_pair(flat, n_utts);
      TrialPair pair;
      pair.pair_id = pair_id++;
      pair.enroll_speaker = speaker.speaker_id;
      pair.enroll_utt = utts[i].utterance_id;
      pair.probe_speaker = speaker.speaker_id;
      pair.probe_utt = utts[j].utterance_id;
      pair.label = 1;
      pair.group = *member.group;
      file.pairs.push_back(std::move(pair));
    }

    for (int k = 0; k < n_diff; ++k) {
      const auto& enroll = utts[rng.uniform_below(n_utts)];
      const Member* partner = partners[rng.uniform_below(partners.size())];
      const SpeakerRecord& other = index.speaker(*partner->id);
      const auto& probe =
          other.utterances[rng.uniform_below(other.utterances.size())];
      TrialPair pair;
      pair.pair_id = pair_id++;
      pair.enroll_speaker = speaker.speaker_id;
      pair.enroll_utt = enroll.utterance_id;
      pair.probe_speaker = other.speaker_id;
      pair.probe_utt = probe.utterance_id;
      pair.label = 0;
      pair.group = *member.group;
      file.pairs.push_back(std::move(pair));
    }
  }
  return file;
}

std::vector<std::string> validate_trials(const TrialFile& file,
                                         const TestRoster& roster,
                                         const DatasetIndex& index) {
  std::vector<std::string> violations;
  auto complain = [&violations](const std::string& what) {
    violations.push_back(what);
  };

  std::map<std::string, const GroupKey*> roster_groups;
  for (const auto& [group, ids] : roster.members) {
    for (const auto& id : ids) roster_groups[id] = &group;
  }

  auto utterance_exists = [&index](const std::string& spk,
                                   const std::string& utt) {
    if (!index.contains(spk)) return false;
    const auto& utts = index.speaker(spk).utterances;
    return std::any_of(utts.begin(), utts.end(), [&utt](const UtteranceRef& u) {
      return u.utterance_id == utt;
    });
  };

  std::map<std::string, std::pair<int, int>> counts;  // speaker -> (gen, imp)
  for (const auto& pair : file.pairs) {
    const std::string tag = "pair " + std::to_string(pair.pair_id);
    if (!roster_groups.count(pair.enroll_speaker)) {
      complain(tag + ": enrollment speaker '" + pair.enroll_speaker +
               "' not in roster");
      continue;
    }
    auto& [gen, imp] = counts[pair.enroll_speaker];
    if (pair.label == 1) {
      ++gen;
      if (pair.enroll_speaker != pair.probe_speaker) {
        complain(tag + ": genuine pair spans two speakers");
      } else if (pair.enroll_utt == pair.probe_utt) {
        complain(tag + ": genuine pair repeats utterance '" + pair.enroll_utt +
                 "'");
      }
    } else if (pair.label == 0) {
      ++imp;
      if (pair.enroll_speaker == pair.probe_speaker) {
        complain(tag + ": impostor pair uses a single speaker");
      } else if (roster_groups.count(pair.probe_speaker)) {
        const GroupKey& a = *roster_groups[pair.enroll_speaker];
        const GroupKey& b = *roster_groups[pair.probe_speaker];
        if (a.language != b.language) {
          complain(tag + ": impostor partner crosses languages");
        } else if (!partner_eligible(file.mode, a, b)) {
          complain(tag + ": impostor partner violates mode " +
                   to_string(file.mode));
        }
      } else {
        complain(tag + ": probe speaker '" + pair.probe_speaker +
                 "' not in roster");
      }
    } else {
      complain(tag + ": label must be 0 or 1");
    }
    if (!utterance_exists(pair.enroll_speaker, pair.enroll_utt)) {
      complain(tag + ": unknown enrollment utterance '" + pair.enroll_utt + "'");
    }
    if (!utterance_exists(pair.probe_speaker, pair.probe_utt)) {
      complain(tag + ": unknown probe utterance '" + pair.probe_utt + "'");
    }
  }

  for (const auto& [id, group] : roster_groups) {
    auto it = counts.find(id);
    const int gen = it == counts.end() ? 0 : it->second.first;
    const int imp = it == counts.end() ? 0 : it->second.second;
    if (gen != file.n_same) {
      complain("speaker '" + id + "': " + std::to_string(gen) +
               " genuine pairs, expected " + std::to_string(file.n_same));
    }
    if (imp != file.n_diff) {
      complain("speaker '" + id + "': " + std::to_string(imp) +
               " impostor pairs, expected " + std::to_string(file.n_diff));
    }
  }
  return violations;
}

std::string serialize_trials(const TrialFile& file, char delimiter) {
  std::string out = join_fields(
      {"pair_id", "label", "enroll_speaker", "enroll_utt", "probe_speaker",
       "probe_utt", "language", "gender", "age_bucket"},
      delimiter, kModule);
  out.push_back('\n');
  for (const auto& pair : file.pairs) {
    out += join_fields(
        {std::to_string(pair.pair_id), std::to_string(pair.label),
         pair.enroll_speaker, pair.enroll_utt, pair.probe_speaker,
         pair.probe_utt, pair.group.language, to_string(pair.group.gender),
         to_string(pair.group.bucket)},
        delimiter, kModule);
    out.push_back('\n');
  }
  return out;
}

TrialFile parse_trials(const std::string& text, TestMode mode, int fold_id,
                       int n_same, int n_diff, char delimiter) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  const std::size_t c_id = table.column("pair_id", kModule);
  const std::size_t c_label = table.column("label", kModule);
  const std::size_t c_es = table.column("enroll_speaker", kModule);
  const std::size_t c_eu = table.column("enroll_utt", kModule);
  const std::size_t c_ps = table.column("probe_speaker", kModule);
  const std::size_t c_pu = table.column("probe_utt", kModule);
  const std::size_t c_lang = table.column("language", kModule);
  const std::size_t c_gender = table.column("gender", kModule);
  const std::size_t c_bucket = table.column("age_bucket", kModule);

  TrialFile file;
  file.mode = mode;
  file.fold_id = fold_id;
  file.n_same = n_same;
  file.n_diff = n_diff;
  for (const auto& row : table.rows) {
    TrialPair pair;
    pair.pair_id = parse_int_strict(row.at(c_id), kModule, "pair_id");
    pair.label = static_cast<int>(parse_int_strict(row.at(c_label), kModule, "label"));
    pair.enroll_speaker = row.at(c_es);
    pair.enroll_utt = row.at(c_eu);
    pair.probe_speaker = row.at(c_ps);
    pair.probe_utt = row.at(c_pu);
    pair.group.language = row.at(c_lang);
    pair.group.gender = parse_gender(row.at(c_gender));
    pair.group.bucket = parse_age_bucket(row.at(c_bucket));
    file.pairs.push_back(std::move(pair));
  }
  if (!file.pairs.empty()) file.language = file.pairs.front().group.language;
  return file;
}

}  // namespace fairsv
