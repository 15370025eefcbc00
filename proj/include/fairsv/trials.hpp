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

#ifndef FAIRSV_TRIALS_HPP_
#define FAIRSV_TRIALS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairsv/manifest.hpp"
#include "fairsv/splits.hpp"
#include "fairsv/types.hpp"

namespace fairsv {

// Impostor partner selection rule: test-1 keeps the partner in the same
// age bucket, test-2 keeps the same gender, test-3 is unconstrained.
enum class TestMode { kSameAge, kSameGender, kRandom };

std::string to_string(TestMode mode);
TestMode parse_test_mode(std::string_view token);  // same_age|same_gender|random

struct TrialPair {
  std::int64_t pair_id = 0;
  std::string enroll_speaker;
  std::string enroll_utt;
  std::string probe_speaker;
  std::string probe_utt;
  int label = 0;    // 1 genuine, 0 impostor
  GroupKey group;   // group of the enrollment speaker
};

struct TrialFile {
  TestMode mode = TestMode::kRandom;
  int fold_id = 0;
  std::string language;
  int n_same = 64;
  int n_diff = 64;
  std::vector<TrialPair> pairs;
};

// Per roster speaker: n_same genuine pairs over that speaker's distinct
// utterance pairs (without replacement when enough exist, with
// replacement otherwise, never pairing an utterance with itself) and
// n_diff impostor pairs against mode-eligible roster partners. The roster
// must cover a single language. Deterministic for a fixed seed; each
// speaker draws from its own derived stream.
TrialFile gen_trials(const TestRoster& roster, const DatasetIndex& index,
                     TestMode mode, int n_same = 64, int n_diff = 64,
                     std::uint64_t seed = 0);

// Scans a trial file against the roster and index; returns one entry per
// violated constraint (empty means valid).
std::vector<std::string> validate_trials(const TrialFile& file,
                                         const TestRoster& roster,
                                         const DatasetIndex& index);

std::string serialize_trials(const TrialFile& file, char delimiter = ',');
TrialFile parse_trials(const std::string& text, TestMode mode, int fold_id,
                       int n_same = 64, int n_diff = 64, char delimiter = ',');

}  // namespace fairsv

#endif  // FAIRSV_TRIALS_HPP_
