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

#ifndef FAIRSV_SYNTH_HPP_
#define FAIRSV_SYNTH_HPP_

#include <cstdint>
#include <map>

#include "fairsv/embeddings.hpp"
#include "fairsv/scoring.hpp"
#include "fairsv/splits.hpp"
#include "fairsv/types.hpp"

namespace fairsv {

// Gaussian score model for one demographic group. With equal standard
// deviations the expected EER has the closed form Phi(-(mu_g - mu_i) /
// (2 sigma)), which makes synthesized files an analytic oracle for the
// metric engine.
struct GroupScoreParams {
  double genuine_mean = 0.6;
  double genuine_sd = 0.1;
  double impostor_mean = 0.4;
  double impostor_sd = 0.1;
  int n_genuine = 1000;
  int n_impostor = 1000;
};

struct GroupScoreSpec {
  std::map<GroupKey, GroupScoreParams> groups;
};

// Per group: Gaussian genuine and impostor similarities clamped to
// [-1, 1]. Each group draws from its own derived stream.
ScoreFile synth_scores(const GroupScoreSpec& spec, std::uint64_t seed);

// Unit-norm centroid per roster speaker; each of the speaker's
// utterances (from the index) is centroid + spread * noise, with the
// spread of the speaker's group. Larger spreads make a group harder.
EmbeddingStore synth_embeddings(const TestRoster& roster,
                                const DatasetIndex& index, int dim,
                                double default_spread, std::uint64_t seed,
                                const std::map<GroupKey, double>& spreads = {});

}  // namespace fairsv

#endif  // FAIRSV_SYNTH_HPP_
