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

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "fairsv/error.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "metrics";

struct SplitScores {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

SplitScores split_by_label(std::span<const ScoreRecord> records,
                           const std::string& what) {
  SplitScores s;
  for (const auto& r : records) {
    (r.label == 1 ? s.genuine : s.impostor).push_back(r.similarity);
  }
  if (s.genuine.empty()) {
    throw Error(kModule, what + " has no genuine records");
  }
  if (s.impostor.empty()) {
    throw Error(kModule, what + " has no impostor records");
  }
  return s;
}

// Candidate thresholds with their rates, ascending. FAR and FRR come from
// cumulative counts over the two sorted score lists.
std::vector<RocPoint> sweep(const SplitScores& s) {
  std::vector<double> genuine = s.genuine;
  std::vector<double> impostor = s.impostor;
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> candidates;
  candidates.reserve(genuine.size() + impostor.size() + 1);
  candidates.insert(candidates.end(), genuine.begin(), genuine.end());
  candidates.insert(candidates.end(), impostor.begin(), impostor.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  candidates.push_back(candidates.back() + 1.0);  // reject-everything sentinel

  const double n_gen = static_cast<double>(genuine.size());
  const double n_imp = static_cast<double>(impostor.size());
  std::vector<RocPoint> points;
  points.reserve(candidates.size());
  for (double t : candidates) {
    // accepted iff similarity >= t
    const auto imp_below =
        std::lower_bound(impostor.begin(), impostor.end(), t) -
        impostor.begin();
    const auto gen_below =
        std::lower_bound(genuine.begin(), genuine.end(), t) - genuine.begin();
    RocPoint p;
    p.threshold = t;
    p.far = (n_imp - static_cast<double>(imp_below)) / n_imp;
    p.frr = static_cast<double>(gen_below) / n_gen;
    points.push_back(p);
  }
  return points;
}

std::map<std::string, std::vector<ScoreRecord>> slice_records(
    const std::vector<ScoreRecord>& records) {
  std::map<std::string, std::vector<ScoreRecord>> slices;
  for (const auto& r : records) {
    slices[to_string(r.group.bucket)].push_back(r);
    slices[to_string(r.group.gender)].push_back(r);
  }
  return slices;
}

}  // namespace

std::vector<RocPoint> sweep_roc(std::span<const ScoreRecord> records) {
  return sweep(split_by_label(records, "score set"));
}

EerResult compute_eer(std::span<const ScoreRecord> records) {
  const auto points = sweep_roc(records);
  const RocPoint* best = &points.front();
  double best_gap = std::abs(best->far - best->frr);
  for (const auto& p : points) {
    const double gap = std::abs(p.far - p.frr);
    if (gap < best_gap) {  // ties keep the earlier (lower) threshold
      best_gap = gap;
      best = &p;
    }
  }
  EerResult result;
  result.threshold = best->threshold;
  result.far_at_t = best->far;
  result.frr_at_t = best->frr;
  result.eer = (best->far + best->frr) / 2.0;
  return result;
}

double far_at(std::span<const ScoreRecord> records, double threshold) {
  std::size_t impostors = 0, accepted = 0;
  for (const auto& r : records) {
    if (r.label != 0) continue;
    ++impostors;
    if (r.similarity >= threshold) ++accepted;
  }
  if (impostors == 0) throw Error(kModule, "no impostor records for FAR");
  return static_cast<double>(accepted) / static_cast<double>(impostors);
}

double frr_at(std::span<const ScoreRecord> records, double threshold) {
  std::size_t genuines = 0, rejected = 0;
  for (const auto& r : records) {
    if (r.label != 1) continue;
    ++genuines;
    if (r.similarity < threshold) ++rejected;
  }
  if (genuines == 0) throw Error(kModule, "no genuine records for FRR");
  return static_cast<double>(rejected) / static_cast<double>(genuines);
}

double disparity(double eer_a, double eer_b) { return std::abs(eer_a - eer_b); }

std::pair<GroupMetrics, DisparityReport> evaluate(const ScoreFile& scorefile) {
  const auto& records = scorefile.records;
  if (records.empty()) throw Error(kModule, "empty score file");

  GroupMetrics metrics;
  metrics.overall = compute_eer(records);
  const double t = metrics.overall.threshold;

  auto slice_metrics = [t](std::span<const ScoreRecord> slice,
                           const std::string& name) {
    SliceMetrics m;
    split_by_label(slice, "slice " + name);  // both classes required
    m.eer = compute_eer(slice);
    m.far = far_at(slice, t);
    m.frr = frr_at(slice, t);
    return m;
  };

  std::map<GroupKey, std::vector<ScoreRecord>> by_group;
  std::map<AgeBucket, std::vector<ScoreRecord>> by_bucket;
  std::map<Gender, std::vector<ScoreRecord>> by_gender;
  for (const auto& r : records) {
    by_group[r.group].push_back(r);
    by_bucket[r.group.bucket].push_back(r);
    by_gender[r.group.gender].push_back(r);
  }

  for (const auto& [key, slice] : by_group) {
    metrics.by_group.emplace(key, slice_metrics(slice, key.label()));
  }
  for (const auto& [bucket, slice] : by_bucket) {
    metrics.by_bucket.emplace(bucket, slice_metrics(slice, to_string(bucket)));
  }
  for (const auto& [gender, slice] : by_gender) {
    metrics.by_gender.emplace(gender, slice_metrics(slice, to_string(gender)));
  }

  if (!metrics.by_bucket.count(AgeBucket::kYoung) ||
      !metrics.by_bucket.count(AgeBucket::kOld)) {
    throw Error(kModule, "both age buckets are required for DS Y/O");
  }
  if (!metrics.by_gender.count(Gender::kFemale) ||
      !metrics.by_gender.count(Gender::kMale)) {
    throw Error(kModule, "both genders are required for DS M/F");
  }

  DisparityReport report;
  report.ds_young_old =
      disparity(metrics.by_bucket.at(AgeBucket::kYoung).eer.eer,
                metrics.by_bucket.at(AgeBucket::kOld).eer.eer);
  report.ds_male_female =
      disparity(metrics.by_gender.at(Gender::kMale).eer.eer,
                metrics.by_gender.at(Gender::kFemale).eer.eer);
  for (auto a = metrics.by_group.begin(); a != metrics.by_group.end(); ++a) {
    for (auto b = std::next(a); b != metrics.by_group.end(); ++b) {
      report.pairwise.emplace_back(
          a->first, b->first, disparity(a->second.eer.eer, b->second.eer.eer));
    }
  }
  return {std::move(metrics), std::move(report)};
}

TTestResult paired_ttest(std::span<const double> xs,
                         std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(kModule, "paired t-test needs equal-length samples, got " +
                             std::to_string(xs.size()) + " and " +
                             std::to_string(ys.size()));
  }
  const std::size_t n = xs.size();
  if (n < 2) throw Error(kModule, "paired t-test needs at least 2 pairs");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = xs[i] - ys[i];
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult result;
  result.degrees_of_freedom = static_cast<int>(n) - 1;
  if (sd == 0.0) {
    if (mean == 0.0) {
      result.t_statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.t_statistic = mean > 0
                               ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
  } else {
    result.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    boost::math::students_t dist(static_cast<double>(n - 1));
    result.p_value =
        2.0 * boost::math::cdf(dist, -std::abs(result.t_statistic));
  }
  result.significant_at_05 = result.p_value < 0.05;
  return result;
}

EpochSeries epoch_series(const std::vector<ScoreFile>& scorefiles) {
  EpochSeries series;
  std::map<int, bool> seen;
  for (const auto& file : scorefiles) {
    if (file.records.empty()) throw Error(kModule, "empty score file in series");
    if (!file.records.front().epoch) {
      throw Error(kModule, "score file lacks an epoch tag");
    }
    const int epoch = *file.records.front().epoch;
    for (const auto& r : file.records) {
      if (!r.epoch || *r.epoch != epoch) {
        throw Error(kModule, "score file mixes epoch tags");
      }
    }
    if (seen[epoch]) {
      throw Error(kModule, "duplicate epoch tag " + std::to_string(epoch));
    }
    seen[epoch] = true;

    series.eer_by_slice["overall"][epoch] = compute_eer(file.records).eer;
    for (const auto& [name, slice] : slice_records(file.records)) {
      series.eer_by_slice[name][epoch] = compute_eer(slice).eer;
    }
  }
  return series;
}

}  // namespace fairsv
