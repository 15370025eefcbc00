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

#include <algorithm>
#include <cmath>

#include "fairsv/error.hpp"
#include "fairsv/random.hpp"

namespace fairsv {

namespace {
constexpr const char* kModule = "synth";
}

ScoreFile synth_scores(const GroupScoreSpec& spec, std::uint64_t seed) {
  if (spec.groups.empty()) throw Error(kModule, "empty score spec");
  for (const auto& [group, params] : spec.groups) {
    if (params.genuine_sd <= 0 || params.impostor_sd <= 0) {
      throw Error(kModule,
                  "standard deviations must be positive for " + group.label());
    }
    if (params.n_genuine <= 0 || params.n_impostor <= 0) {
      throw Error(kModule, "counts must be positive for " + group.label());
    }
  }

  ScoreFile file;
  file.provenance = {"synth", "synth", "synthetic"};
  std::int64_t pair_id = 0;
  for (const auto& [group, params] : spec.groups) {
    Rng rng(derive_seed(seed, "synth_scores|" + group.label()));
    auto emit = [&](int label, double mean, double sd, int count) {
      for (int i = 0; i < count; ++i) {
        ScoreRecord r;
        r.pair_id = pair_id++;
        r.label = label;
        r.similarity = std::clamp(mean + sd * rng.gaussian(), -1.0, 1.0);
        r.group = group;
        file.records.push_back(std::move(r));
      }
    };
    emit(1, params.genuine_mean, params.genuine_sd, params.n_genuine);
    emit(0, params.impostor_mean, params.impostor_sd, params.n_impostor);
  }
  return file;
}

EmbeddingStore synth_embeddings(const TestRoster& roster,
                                const DatasetIndex& index, int dim,
                                double default_spread, std::uint64_t seed,
                                const std::map<GroupKey, double>& spreads) {
  if (dim < 2) throw Error(kModule, "embedding dim must be >= 2");
  if (default_spread <= 0) throw Error(kModule, "spread must be positive");
  for (const auto& [group, spread] : spreads) {
    if (spread <= 0) {
      throw Error(kModule, "spread must be positive for " + group.label());
    }
  }

  EmbeddingStore store;
  for (const auto& [group, ids] : roster.members) {
    auto it = spreads.find(group);
    const double spread = it == spreads.end() ? default_spread : it->second;
    for (const auto& id : ids) {
      const SpeakerRecord& speaker = index.speaker(id);
      Rng rng(derive_seed(seed, "synth_embeddings|" + id));
      std::vector<double> centroid(static_cast<std::size_t>(dim));
      double norm = 0.0;
      do {
        norm = 0.0;
        for (auto& v : centroid) {
          v = rng.gaussian();
          norm += v * v;
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (auto& v : centroid) v /= norm;

      for (const auto& utt : speaker.utterances) {
        Embedding e;
        e.source = EmbeddingSource::kSynthetic;
        e.values.resize(centroid.size());
        for (std::size_t i = 0; i < centroid.size(); ++i) {
          e.values[i] = centroid[i] + spread * rng.gaussian();
        }
        store.insert(id, utt.utterance_id, std::move(e));
      }
    }
  }
  return store;
}

}  // namespace fairsv
