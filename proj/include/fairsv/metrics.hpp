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

#ifndef FAIRSV_METRICS_HPP_
#define FAIRSV_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "fairsv/scoring.hpp"
#include "fairsv/types.hpp"

namespace fairsv {

struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;  // impostors accepted / impostors
  double frr = 0.0;  // genuines rejected / genuines
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  double far_at_t = 0.0;
  double frr_at_t = 0.0;
};

// The decision rule throughout is accept iff similarity >= threshold.
// Candidate thresholds are the distinct similarities plus one sentinel
// above the maximum (where everything is rejected).
std::vector<RocPoint> sweep_roc(std::span<const ScoreRecord> records);

// Candidate threshold minimizing |FAR - FRR| (ties to the lower
// threshold); the reported EER is the midpoint of the two rates there.
EerResult compute_eer(std::span<const ScoreRecord> records);

double far_at(std::span<const ScoreRecord> records, double threshold);
double frr_at(std::span<const ScoreRecord> records, double threshold);

// |eer_a - eer_b|, the disparity score between two groups.
double disparity(double eer_a, double eer_b);

// Rates for one demographic slice; far/frr are taken at the overall EER
// threshold so groups share an operating point.
struct SliceMetrics {
  EerResult eer;
  double far = 0.0;
  double frr = 0.0;
};

struct GroupMetrics {
  EerResult overall;
  std::map<GroupKey, SliceMetrics> by_group;
  std::map<AgeBucket, SliceMetrics> by_bucket;
  std::map<Gender, SliceMetrics> by_gender;
};

struct DisparityReport {
  double ds_young_old = 0.0;
  double ds_male_female = 0.0;
  std::vector<std::tuple<GroupKey, GroupKey, double>> pairwise;
};

// Slices records by the enrollment speaker's group; every slice must
// contain both classes.
std::pair<GroupMetrics, DisparityReport> evaluate(const ScoreFile& scorefile);

struct TTestResult {
  double t_statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  bool significant_at_05 = false;
};

// Two-tailed paired Student t-test. Degenerate inputs follow a total
// order on evidence: all-zero differences give p = 1, zero variance with
// a nonzero mean gives p = 0.
TTestResult paired_ttest(std::span<const double> xs,
                         std::span<const double> ys);

// slice name ("overall", "old", "young", "female", "male") -> epoch -> EER.
struct EpochSeries {
  std::map<std::string, std::map<int, double>> eer_by_slice;
};

// Each score file must carry one distinct epoch tag on all its records.
EpochSeries epoch_series(const std::vector<ScoreFile>& scorefiles);

}  // namespace fairsv

#endif  // FAIRSV_METRICS_HPP_
