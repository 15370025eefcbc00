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

#ifndef FAIRSV_TYPES_HPP_
#define FAIRSV_TYPES_HPP_

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace fairsv {

enum class Gender { kFemale, kMale };
enum class AgeBucket { kYoung, kOld };

std::string to_string(Gender g);
std::string to_string(AgeBucket b);
Gender parse_gender(std::string_view token);      // "female" | "male"
AgeBucket parse_age_bucket(std::string_view token);  // "young" | "old"

// One demographic cell: language x gender x age bucket.
struct GroupKey {
  std::string language;
  Gender gender = Gender::kFemale;
  AgeBucket bucket = AgeBucket::kYoung;

  auto operator<=>(const GroupKey&) const = default;

  // "english/female/young" — used in diagnostics and seed derivation.
  std::string label() const;
};

struct UtteranceRef {
  std::string utterance_id;
  std::string audio_path;  // as written in the manifest, resolved lazily
};

struct SpeakerRecord {
  std::string speaker_id;
  std::string language;
  Gender gender = Gender::kFemale;
  int age_years = 0;
  std::vector<UtteranceRef> utterances;  // manifest row order
};

}  // namespace fairsv

#endif  // FAIRSV_TYPES_HPP_
