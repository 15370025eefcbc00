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

#include "fairsv/synth.hpp"

#include <doctest.h>

#include "fairsv/error.hpp"
#include "fairsv/metrics.hpp"
#include "fairsv/trials.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace fairsv;
using fairsv::testing::CellCounts;
using fairsv::testing::make_cell_index;

namespace {

GroupScoreSpec uniform_spec(double gap_sigma, int n = 2000) {
  GroupScoreSpec spec;
  for (Gender g : {Gender::kFemale, Gender::kMale}) {
    for (AgeBucket b : {AgeBucket::kYoung, AgeBucket::kOld}) {
      GroupScoreParams params;
      params.genuine_sd = params.impostor_sd = 0.1;
      params.impostor_mean = 0.3;
      params.genuine_mean = 0.3 + gap_sigma * 0.1;
      params.n_genuine = params.n_impostor = n;
      spec.groups.emplace(GroupKey{"english", g, b}, params);
    }
  }
  return spec;
}

}  // namespace

TEST_CASE("synthetic scores are deterministic and clamped") {
  GroupScoreSpec spec = uniform_spec(2.0, 500);
  ScoreFile a = synth_scores(spec, 9);
  ScoreFile b = synth_scores(spec, 9);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.records.size() == 4 * 1000);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].similarity == b.records[i].similarity);
    CHECK(a.records[i].similarity >= -1.0);
    CHECK(a.records[i].similarity <= 1.0);
  }
  ScoreFile c = synth_scores(spec, 10);
  bool identical = true;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    identical &= a.records[i].similarity == c.records[i].similarity;
  }
  CHECK_FALSE(identical);
}

TEST_CASE("measured group EER approaches the Gaussian-overlap value") {
  // Separation of two sigmas per group.
  ScoreFile file = synth_scores(uniform_spec(2.0, 4000), 123);
  auto [metrics, ds] = evaluate(file);
  const double expected = fairsv::testing::gaussian_overlap_eer(0.5, 0.3, 0.1);
  CHECK(expected == doctest::Approx(0.158655).epsilon(1e-4));
  for (const auto& [group, slice] : metrics.by_group) {
    CHECK(std::abs(slice.eer.eer - expected) < 0.015);
  }
  // Identical specs across groups: disparities vanish up to noise.
  CHECK(ds.ds_young_old < 0.02);
  CHECK(ds.ds_male_female < 0.02);
}

TEST_CASE("a narrower separation raises the group EER") {
  GroupScoreSpec spec = uniform_spec(2.0, 3000);
  // Weaken old-male only.
  GroupKey weak{"english", Gender::kMale, AgeBucket::kOld};
  spec.groups.at(weak).genuine_mean = 0.3 + 1.0 * 0.1;  // one sigma
  ScoreFile file = synth_scores(spec, 321);
  auto [metrics, ds] = evaluate(file);
  const double weak_eer = metrics.by_group.at(weak).eer.eer;
  for (const auto& [group, slice] : metrics.by_group) {
    if (!(group == weak)) CHECK(slice.eer.eer < weak_eer);
  }
}

TEST_CASE("spec validation") {
  GroupScoreSpec spec = uniform_spec(2.0, 10);
  spec.groups.begin()->second.genuine_sd = 0.0;
  CHECK_THROWS_AS(synth_scores(spec, 1), Error);
  GroupScoreSpec empty;
  CHECK_THROWS_AS(synth_scores(empty, 1), Error);
}

TEST_CASE("synthetic embeddings: determinism and tight clusters") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 4;
  DatasetIndex index = make_cell_index("english", counts, 5);
  SplitConfig cfg;
  cfg.seed = 7;
  cfg.test_users_per_group = 3;
  TestRoster roster = select_test_roster(index, cfg, 0);

  EmbeddingStore a = synth_embeddings(roster, index, 8, 0.05, 77);
  EmbeddingStore b = synth_embeddings(roster, index, 8, 0.05, 77);
  CHECK(a.size() == b.size());
  CHECK(a.size() == 12 * 5);
  CHECK(a.dim() == 8);
  for (const auto& [key, e] : a.entries()) {
    const Embedding& other = b.lookup(key.first, key.second);
    for (std::size_t i = 0; i < e.dim(); ++i) {
      CHECK(e.values[i] == other.values[i]);
    }
  }

  // Near-zero spread collapses genuine similarities toward one.
  EmbeddingStore tight = synth_embeddings(roster, index, 8, 1e-9, 3);
  TrialFile trials = gen_trials(roster, index, TestMode::kRandom, 8, 8, 5);
  ScoreFile scores = score_trials(trials, tight);
  for (const auto& r : scores.records) {
    if (r.label == 1) CHECK(r.similarity == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("wider per-group spread degrades that group's pipeline EER") {
  CellCounts counts;
  counts.young_female = counts.old_female = counts.young_male =
      counts.old_male = 12;
  DatasetIndex index = make_cell_index("english", counts, 6);
  SplitConfig cfg;
  cfg.seed = 13;
  cfg.test_users_per_group = 10;
  TestRoster roster = select_test_roster(index, cfg, 0);

  std::map<GroupKey, double> spreads;
  spreads[{"english", Gender::kFemale, AgeBucket::kOld}] = 0.9;
  spreads[{"english", Gender::kMale, AgeBucket::kOld}] = 0.9;
  EmbeddingStore store = synth_embeddings(roster, index, 16, 0.15, 99, spreads);

  TrialFile trials = gen_trials(roster, index, TestMode::kRandom, 32, 32, 21);
  auto [metrics, ds] = evaluate(score_trials(trials, store));
  CHECK(metrics.by_bucket.at(AgeBucket::kOld).eer.eer >
        metrics.by_bucket.at(AgeBucket::kYoung).eer.eer);
  CHECK(ds.ds_young_old > 0.0);
}

TEST_CASE("synthetic embedding parameters are validated") {
  CellCounts counts;
  counts.young_female = 2;
  DatasetIndex index = make_cell_index("english", counts, 5);
  TestRoster roster;
  roster.members.emplace_back(
      GroupKey{"english", Gender::kFemale, AgeBucket::kYoung},
      std::vector<std::string>{index.records[0].speaker_id});
  CHECK_THROWS_AS(synth_embeddings(roster, index, 1, 0.1, 1), Error);
  CHECK_THROWS_AS(synth_embeddings(roster, index, 4, 0.0, 1), Error);
}
