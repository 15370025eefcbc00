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

#ifndef FAIRSV_WAV_HPP_
#define FAIRSV_WAV_HPP_

#include <filesystem>
#include <vector>

namespace fairsv {

inline constexpr int kTargetSampleRate = 16000;

struct Waveform {
  std::vector<double> samples;  // mono, [-1, 1]
  int sample_rate = kTargetSampleRate;
};

// RIFF PCM decoder (8/16-bit, any channel count averaged to mono).
// Output is normalized to [-1, 1] and resampled to 16 kHz.
Waveform load_wav(const std::filesystem::path& path);

Waveform resample_linear(const Waveform& wave, int target_rate);

// 16-bit mono PCM writer, used for fixtures and round-trip checks.
void write_wav_pcm16(const std::filesystem::path& path, const Waveform& wave);

}  // namespace fairsv

#endif  // FAIRSV_WAV_HPP_
