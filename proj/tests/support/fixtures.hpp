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

#ifndef FAIRSV_TESTS_FIXTURES_HPP_
#define FAIRSV_TESTS_FIXTURES_HPP_

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fairsv/manifest.hpp"
#include "fairsv/scoring.hpp"
#include "fairsv/types.hpp"

namespace fairsv::testing {

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate =
          base / ("fairsv_test_" + std::to_string(counter_++) + "_" +
                  std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    if (path_.empty()) return;
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept : path_(std::move(other.path_)) {
    other.path_.clear();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline SpeakerRecord make_speaker(const std::string& id,
                                  const std::string& language, Gender gender,
                                  int age, int n_utts) {
  SpeakerRecord r;
  r.speaker_id = id;
  r.language = language;
  r.gender = gender;
  r.age_years = age;
  for (int u = 0; u < n_utts; ++u) {
    r.utterances.push_back(
        {"u" + std::to_string(u), id + "/u" + std::to_string(u) + ".wav"});
  }
  return r;
}

struct CellCounts {
  std::size_t young_female = 0;
  std::size_t old_female = 0;
  std::size_t young_male = 0;
  std::size_t old_male = 0;
};

// Index with the requested number of speakers per demographic cell.
// utts_per_speaker <= 0 cycles 5..8 so speaker sizes vary.
inline DatasetIndex make_cell_index(const std::string& language,
                                    const CellCounts& counts,
                                    int utts_per_speaker = 5) {
  std::vector<SpeakerRecord> records;
  int serial = 0;
  auto add = [&](Gender g, int age, std::size_t n, const char* tag) {
    for (std::size_t i = 0; i < n; ++i) {
      const int utts =
          utts_per_speaker > 0 ? utts_per_speaker : 5 + (serial % 4);
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%s%04d", language.c_str(), tag,
                    serial++);
      records.push_back(make_speaker(id, language, g, age, utts));
    }
  };
  add(Gender::kFemale, 25, counts.young_female, "yf");
  add(Gender::kFemale, 55, counts.old_female, "of");
  add(Gender::kMale, 25, counts.young_male, "ym");
  add(Gender::kMale, 55, counts.old_male, "om");
  return build_index(std::move(records), 40);
}

inline std::vector<ScoreRecord> make_scores(
    const std::vector<double>& genuine, const std::vector<double>& impostor,
    const GroupKey& group = {"english", Gender::kFemale, AgeBucket::kYoung}) {
  std::vector<ScoreRecord> records;
  std::int64_t id = 0;
  for (double s : genuine) records.push_back({id++, 1, s, group, {}});
  for (double s : impostor) records.push_back({id++, 0, s, group, {}});
  return records;
}

// Random score set of 3..max_n records with both classes guaranteed;
// roughly a third of the sets are quantized to one decimal so candidate
// thresholds collide.
template <typename RngT>
std::vector<ScoreRecord> random_score_records(RngT& rng,
                                              std::size_t max_n = 200) {
  const std::size_t n = 3 + rng.uniform_below(max_n - 2);
  const bool quantize = rng.uniform_below(3) == 0;
  const GroupKey g{"english", Gender::kFemale, AgeBucket::kYoung};
  std::vector<ScoreRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 2.0 * rng.uniform_real() - 1.0;
    if (quantize) s = std::round(s * 10.0) / 10.0;
    const int label =
        i == 0 ? 1 : (i == 1 ? 0 : static_cast<int>(rng.uniform_below(2)));
    records.push_back({static_cast<std::int64_t>(i), label, s, g, {}});
  }
  return records;
}

}  // namespace fairsv::testing

#endif  // FAIRSV_TESTS_FIXTURES_HPP_
