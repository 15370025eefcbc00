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

#include "fairsv/metrics.hpp"

#include <doctest.h>

#include <cmath>

#include "fairsv/error.hpp"
#include "fairsv/random.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace fairsv;
using fairsv::testing::make_scores;

namespace {

using fairsv::testing::random_score_records;

ScoreFile four_group_file(double female_young_gap, double female_old_gap,
                          double male_young_gap, double male_old_gap,
                          int n_per_class, std::uint64_t seed) {
  ScoreFile file;
  Rng rng(seed);
  std::int64_t id = 0;
  auto add_group = [&](Gender gender, AgeBucket bucket, double gap) {
    GroupKey g{"english", gender, bucket};
    for (int i = 0; i < n_per_class; ++i) {
      file.records.push_back(
          {id++, 1, 0.5 + gap / 2.0 + 0.1 * rng.gaussian(), g, {}});
      file.records.push_back(
          {id++, 0, 0.5 - gap / 2.0 + 0.1 * rng.gaussian(), g, {}});
    }
  };
  add_group(Gender::kFemale, AgeBucket::kYoung, female_young_gap);
  add_group(Gender::kFemale, AgeBucket::kOld, female_old_gap);
  add_group(Gender::kMale, AgeBucket::kYoung, male_young_gap);
  add_group(Gender::kMale, AgeBucket::kOld, male_old_gap);
  return file;
}

}  // namespace

TEST_CASE("sweep covers separable, degenerate and interleaved sets") {
  SUBCASE("separable scores reach FAR 0 / FRR 0") {
    auto records = make_scores({0.9}, {0.1});
    auto points = sweep_roc(records);
    bool perfect = false;
    for (const auto& p : points) {
      if (p.far == 0.0 && p.frr == 0.0) perfect = true;
    }
    CHECK(perfect);
  }
  SUBCASE("all-equal scores flip between accept-all and reject-all") {
    auto records = make_scores({0.5, 0.5}, {0.5, 0.5});
    auto points = sweep_roc(records);
    REQUIRE(points.size() == 2);
    CHECK(points[0].threshold == doctest::Approx(0.5));
    CHECK(points[0].far == 1.0);
    CHECK(points[0].frr == 0.0);
    CHECK(points[1].far == 0.0);  // sentinel above the max
    CHECK(points[1].frr == 1.0);
  }
  SUBCASE("hand-counted interleaved set") {
    auto records = make_scores({0.8, 0.6, 0.4}, {0.7, 0.5, 0.3});
    auto points = sweep_roc(records);
    bool found = false;
    for (const auto& p : points) {
      if (p.threshold == doctest::Approx(0.6)) {
        CHECK(p.far == doctest::Approx(1.0 / 3.0));
        CHECK(p.frr == doctest::Approx(1.0 / 3.0));
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("eer on hand fixtures") {
  CHECK(compute_eer(make_scores({0.9, 0.8}, {0.2, 0.1})).eer == 0.0);

  EerResult r = compute_eer(make_scores({0.8, 0.6, 0.4}, {0.7, 0.5, 0.3}));
  CHECK(r.eer == doctest::Approx(1.0 / 3.0));
  CHECK(r.threshold == doctest::Approx(0.6));
  CHECK(r.far_at_t == doctest::Approx(r.frr_at_t));
}

TEST_CASE("eer equals the brute-force oracle on randomized sets") {
  Rng rng(424242);
  for (int i = 0; i < 300; ++i) {
    const auto records = random_score_records(rng);
    const EerResult engine = compute_eer(records);
    const auto oracle = fairsv::testing::brute_force_eer(records);
    CHECK(engine.eer == oracle.eer);
    CHECK(engine.threshold == oracle.threshold);
    CHECK(engine.far_at_t == oracle.far);
    CHECK(engine.frr_at_t == oracle.frr);
  }
}

TEST_CASE("roc is monotone and eer is rank-invariant") {
  Rng rng(777);
  for (int i = 0; i < 100; ++i) {
    const auto records = random_score_records(rng);
    const auto points = sweep_roc(records);
    for (std::size_t k = 1; k < points.size(); ++k) {
      CHECK(points[k].threshold > points[k - 1].threshold);
      CHECK(points[k].far <= points[k - 1].far);
      CHECK(points[k].frr >= points[k - 1].frr);
    }

    // A strictly increasing transform must not change the EER.
    auto transformed = records;
    for (auto& r : transformed) {
      r.similarity = std::tanh(1.7 * r.similarity + 0.2);
    }
    CHECK(compute_eer(transformed).eer == compute_eer(records).eer);
  }
}

TEST_CASE("far/frr at a threshold follow the accept-at-equality rule") {
  auto records = make_scores({0.9}, {0.1, 0.2});
  CHECK(far_at(records, 0.15) == doctest::Approx(0.5));
  CHECK(frr_at(records, 0.9) == 0.0);  // equality accepts
  CHECK(far_at(records, 0.95) == 0.0);
  CHECK(frr_at(records, 0.95) == 1.0);
  CHECK(far_at(records, -2.0) == 1.0);

  std::vector<ScoreRecord> only_genuine = make_scores({0.5}, {});
  CHECK_THROWS_AS(far_at(only_genuine, 0.0), Error);
  std::vector<ScoreRecord> only_impostor = make_scores({}, {0.5});
  CHECK_THROWS_AS(frr_at(only_impostor, 0.0), Error);
  CHECK_THROWS_AS(compute_eer(only_genuine), Error);
}

TEST_CASE("disparity is a symmetric non-negative difference") {
  CHECK(disparity(5.80, 7.75) == doctest::Approx(1.95));
  CHECK(disparity(7.75, 5.80) == doctest::Approx(1.95));
  CHECK(disparity(4.0, 4.0) == 0.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform_real(), b = rng.uniform_real();
    CHECK(disparity(a, b) == disparity(b, a));
    CHECK(disparity(a, b) >= 0.0);
    CHECK(disparity(a, a) == 0.0);
  }
}

TEST_CASE("evaluate slices by group and reports disparities") {
  // Young groups separable at gap 0.5, old groups overlapping at 0.1:
  // the old bucket must carry the higher EER.
  ScoreFile file = four_group_file(0.5, 0.1, 0.5, 0.1, 400, 99);
  auto [metrics, ds] = evaluate(file);

  CHECK(metrics.by_group.size() == 4);
  CHECK(metrics.by_bucket.size() == 2);
  CHECK(metrics.by_gender.size() == 2);
  const double eer_young = metrics.by_bucket.at(AgeBucket::kYoung).eer.eer;
  const double eer_old = metrics.by_bucket.at(AgeBucket::kOld).eer.eer;
  CHECK(eer_old > eer_young);
  CHECK(ds.ds_young_old == doctest::Approx(std::abs(eer_young - eer_old)));
  CHECK(ds.ds_young_old > 0.05);
  CHECK(ds.ds_male_female < 0.05);
  CHECK(ds.pairwise.size() == 6);

  // far/frr of each slice are evaluated at the overall threshold.
  const double t = metrics.overall.threshold;
  for (const auto& [bucket, slice] : metrics.by_bucket) {
    std::vector<ScoreRecord> subset;
    for (const auto& r : file.records) {
      if (r.group.bucket == bucket) subset.push_back(r);
    }
    CHECK(slice.far == doctest::Approx(far_at(subset, t)));
    CHECK(slice.frr == doctest::Approx(frr_at(subset, t)));
  }
}

TEST_CASE("identical group distributions give zero disparity") {
  ScoreFile file = four_group_file(0.4, 0.4, 0.4, 0.4, 300, 3);
  // Force identical scores across groups: regenerate each group's block
  // from the same stream by reusing one group's values.
  std::vector<double> genuine, impostor;
  for (const auto& r : file.records) {
    if (r.group.gender == Gender::kFemale &&
        r.group.bucket == AgeBucket::kYoung) {
      (r.label == 1 ? genuine : impostor).push_back(r.similarity);
    }
  }
  std::size_t gi = 0, ii = 0;
  for (auto& r : file.records) {
    r.similarity = r.label == 1 ? genuine[gi++ % genuine.size()]
                                : impostor[ii++ % impostor.size()];
  }
  auto [metrics, ds] = evaluate(file);
  CHECK(ds.ds_young_old == doctest::Approx(0.0));
  CHECK(ds.ds_male_female == doctest::Approx(0.0));
}

TEST_CASE("evaluate names a slice that lacks a class") {
  ScoreFile file = four_group_file(0.3, 0.3, 0.3, 0.3, 10, 4);
  // Drop every genuine record of the old-male group.
  std::erase_if(file.records, [](const ScoreRecord& r) {
    return r.label == 1 && r.group.gender == Gender::kMale &&
           r.group.bucket == AgeBucket::kOld;
  });
  CHECK_THROWS_WITH_AS(evaluate(file), doctest::Contains("english/male/old"),
                       Error);
}

TEST_CASE("paired t-test hand fixture and degenerate rules") {
  SUBCASE("d = {1,2,3}") {
    const std::vector<double> xs{2.0, 4.0, 6.0};
    const std::vector<double> ys{1.0, 2.0, 3.0};
    TTestResult r = paired_ttest(xs, ys);
    CHECK(r.degrees_of_freedom == 2);
    CHECK(r.t_statistic == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));
    CHECK(r.p_value == doctest::Approx(0.0742).epsilon(0.02));
    const double oracle_p = fairsv::testing::ttest_p_two_tailed_quadrature(
        r.t_statistic, r.degrees_of_freedom);
    CHECK(std::abs(r.p_value - oracle_p) < 1e-6);
    CHECK_FALSE(r.significant_at_05);
  }
  SUBCASE("identical samples are maximally non-significant") {
    const std::vector<double> xs{0.3, 0.5, 0.9, 0.1};
    TTestResult r = paired_ttest(xs, xs);
    CHECK(r.t_statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.significant_at_05);
  }
  SUBCASE("zero variance with nonzero mean is maximally significant") {
    const std::vector<double> xs{2.0, 3.0, 4.0};
    const std::vector<double> ys{1.0, 2.0, 3.0};
    TTestResult r = paired_ttest(xs, ys);
    CHECK(r.p_value == 0.0);
    CHECK(r.significant_at_05);
    CHECK(std::isinf(r.t_statistic));
  }
  SUBCASE("bad inputs") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(paired_ttest(one, one), Error);
    const std::vector<double> two{1.0, 2.0};
    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(paired_ttest(two, three), Error);
  }
}

TEST_CASE("t-test p-values match the quadrature oracle across inputs") {
  Rng rng(31337);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.uniform_below(30);
    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
      xs[k] = rng.gaussian();
      ys[k] = rng.gaussian() + 0.3;
    }
    TTestResult r = paired_ttest(xs, ys);
    if (!std::isfinite(r.t_statistic)) continue;
    const double oracle = fairsv::testing::ttest_p_two_tailed_quadrature(
        r.t_statistic, r.degrees_of_freedom);
    CHECK(r.p_value == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("epoch series: counts, ordering, degradation, duplicates") {
  auto tagged = [](ScoreFile file, int epoch) {
    for (auto& r : file.records) r.epoch = epoch;
    return file;
  };
  ScoreFile e1 = tagged(four_group_file(0.6, 0.6, 0.6, 0.6, 200, 1), 1);
  ScoreFile e2 = tagged(four_group_file(0.5, 0.4, 0.5, 0.4, 200, 2), 2);
  ScoreFile e3 = tagged(four_group_file(0.4, 0.2, 0.4, 0.2, 200, 3), 3);

  EpochSeries series = epoch_series({e1, e2, e3});
  CHECK(series.eer_by_slice.size() == 5);  // overall + 2 buckets + 2 genders
  for (const auto& [slice, by_epoch] : series.eer_by_slice) {
    CHECK(by_epoch.size() == 3);
  }
  // The old bucket's separation shrinks each epoch, so its EER cannot
  // improve.
  const auto& old_series = series.eer_by_slice.at("old");
  CHECK(old_series.at(1) <= old_series.at(2));
  CHECK(old_series.at(2) <= old_series.at(3));

  EpochSeries single = epoch_series({e2});
  for (const auto& [slice, by_epoch] : single.eer_by_slice) {
    CHECK(by_epoch.size() == 1);
  }

  CHECK_THROWS_WITH_AS(epoch_series({e1, tagged(e2, 1)}),
                       doctest::Contains("duplicate epoch"), Error);
  CHECK_THROWS_WITH_AS(epoch_series({four_group_file(0.5, 0.5, 0.5, 0.5, 10, 4)}),
                       doctest::Contains("epoch tag"), Error);
}
