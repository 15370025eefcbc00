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

#ifndef FAIRSV_FEATURES_HPP_
#define FAIRSV_FEATURES_HPP_

#include <cstddef>
#include <vector>

#include "fairsv/embeddings.hpp"
#include "fairsv/wav.hpp"

namespace fairsv {

// Front-end parameters. Defaults are the conventional 25 ms / 10 ms
// Hamming-window configuration; all values are overridable. fft_size must
// be a power of two (the transform is radix-2).
struct FeatureConfig {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  int fft_size = 512;
  int n_mels = 40;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  double log_floor = 1e-10;
};

enum class FeatureKind { kSpectrogram, kLogMel };

// frames x bins, row-major.
struct FeatureMatrix {
  FeatureKind kind = FeatureKind::kSpectrogram;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> data;

  double at(std::size_t frame, std::size_t bin) const {
    return data[frame * bins + bin];
  }
  double& at(std::size_t frame, std::size_t bin) {
    return data[frame * bins + bin];
  }
};

// frames = floor((n_samples - window) / hop) + 1.
std::size_t frame_count(std::size_t n_samples, std::size_t window_samples,
                        std::size_t hop_samples);

// Magnitude STFT; bins = fft_size / 2 + 1.
FeatureMatrix spectrogram(const Waveform& wave, const FeatureConfig& cfg = {});

// Triangular HTK-mel filterbank (2595 * log10(1 + f/700)) over the power
// spectrum, natural log with floor; bins = n_mels.
FeatureMatrix logmel(const Waveform& wave, const FeatureConfig& cfg = {});

// Training-free utterance embedder: subtracts the utterance-level mean,
// then concatenates per-band means and per-band population standard
// deviations (dim = 2 * n_mels). Requires log-mel input with >= 2 frames.
Embedding baseline_embed(const FeatureMatrix& features);

std::string serialize_features(const FeatureMatrix& m, char delimiter = ',');
FeatureMatrix parse_features(const std::string& text, FeatureKind kind,
                             char delimiter = ',');

}  // namespace fairsv

#endif  // FAIRSV_FEATURES_HPP_
