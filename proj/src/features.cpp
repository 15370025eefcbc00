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

#include "fairsv/features.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "acoustic";

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

struct FrameGrid {
  std::size_t window = 0;
  std::size_t hop = 0;
  std::size_t frames = 0;
};

FrameGrid validate(const Waveform& wave, const FeatureConfig& cfg) {
  if (wave.samples.empty()) throw Error(kModule, "empty waveform");
  if (cfg.window_ms <= 0 || cfg.hop_ms <= 0) {
    throw Error(kModule, "window_ms and hop_ms must be positive");
  }
  if (cfg.window_ms < cfg.hop_ms) {
    throw Error(kModule, "window_ms must be >= hop_ms");
  }
  if (!is_power_of_two(cfg.fft_size)) {
    throw Error(kModule, "fft_size must be a power of two, got " +
                             std::to_string(cfg.fft_size));
  }
  if (cfg.fmax_hz > wave.sample_rate / 2.0) {
    throw Error(kModule, "fmax_hz exceeds the Nyquist frequency");
  }
  if (cfg.fmin_hz < 0 || cfg.fmin_hz >= cfg.fmax_hz) {
    throw Error(kModule, "need 0 <= fmin_hz < fmax_hz");
  }
  if (cfg.log_floor <= 0) throw Error(kModule, "log_floor must be positive");

  FrameGrid grid;
  grid.window = static_cast<std::size_t>(
      std::llround(wave.sample_rate * cfg.window_ms / 1000.0));
  grid.hop = static_cast<std::size_t>(
      std::llround(wave.sample_rate * cfg.hop_ms / 1000.0));
  if (grid.window < 2 || grid.hop < 1) {
    throw Error(kModule, "window/hop too short for the sample rate");
  }
  if (static_cast<std::size_t>(cfg.fft_size) < grid.window) {
    throw Error(kModule, "fft_size " + std::to_string(cfg.fft_size) +
                             " smaller than the window of " +
                             std::to_string(grid.window) + " samples");
  }
  if (wave.samples.size() < grid.window) {
    throw Error(kModule, "waveform shorter than one window (" +
                             std::to_string(wave.samples.size()) + " < " +
                             std::to_string(grid.window) + " samples)");
  }
  grid.frames = frame_count(wave.samples.size(), grid.window, grid.hop);
  return grid;
}

std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  }
  return w;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Triangular filters, one row per mel band over fft_size/2 + 1 bins.
std::vector<std::vector<double>> mel_filterbank(const FeatureConfig& cfg,
                                                int sample_rate) {
  const std::size_t n_bins = static_cast<std::size_t>(cfg.fft_size) / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.fmin_hz);
  const double mel_hi = hz_to_mel(cfg.fmax_hz);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));
  }
  std::vector<std::vector<double>> bank(cfg.n_mels,
                                        std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double freq =
          static_cast<double>(k) * sample_rate / cfg.fft_size;
      if (freq <= left || freq >= right) continue;
      bank[m][k] = freq <= center ? (freq - left) / (center - left)
                                  : (right - freq) / (right - center);
    }
  }
  return bank;
}

// Power spectra for all frames (frames x (fft/2+1)).
std::vector<std::vector<double>> power_frames(const Waveform& wave,
                                              const FeatureConfig& cfg,
                                              const FrameGrid& grid) {
  const std::size_t n_bins = static_cast<std::size_t>(cfg.fft_size) / 2 + 1;
  const std::vector<double> window = hamming(grid.window);
  std::vector<std::vector<double>> out(grid.frames,
                                       std::vector<double>(n_bins));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(cfg.fft_size));
  for (std::size_t f = 0; f < grid.frames; ++f) {
    const double* src = wave.samples.data() + f * grid.hop;
    for (std::size_t i = 0; i < grid.window; ++i) {
      buf[i] = src[i] * window[i];
    }
    for (std::size_t i = grid.window; i < buf.size(); ++i) buf[i] = 0.0;
    fft_radix2(buf);
    for (std::size_t k = 0; k < n_bins; ++k) out[f][k] = std::norm(buf[k]);
  }
  return out;
}

}  // namespace

std::size_t frame_count(std::size_t n_samples, std::size_t window_samples,
                        std::size_t hop_samples) {
  if (n_samples < window_samples) return 0;
  return (n_samples - window_samples) / hop_samples + 1;
}

FeatureMatrix spectrogram(const Waveform& wave, const FeatureConfig& cfg) {
  const FrameGrid grid = validate(wave, cfg);
  const auto power = power_frames(wave, cfg, grid);
  FeatureMatrix m;
  m.kind = FeatureKind::kSpectrogram;
  m.frames = grid.frames;
  m.bins = static_cast<std::size_t>(cfg.fft_size) / 2 + 1;
  m.data.resize(m.frames * m.bins);
  for (std::size_t f = 0; f < m.frames; ++f) {
    for (std::size_t k = 0; k < m.bins; ++k) {
      m.at(f, k) = std::sqrt(power[f][k]);
    }
  }
  return m;
}

FeatureMatrix logmel(const Waveform& wave, const FeatureConfig& cfg) {
  if (cfg.n_mels < 1) throw Error(kModule, "n_mels must be positive");
  const FrameGrid grid = validate(wave, cfg);
  const auto power = power_frames(wave, cfg, grid);
  const auto bank = mel_filterbank(cfg, wave.sample_rate);
  FeatureMatrix m;
  m.kind = FeatureKind::kLogMel;
  m.frames = grid.frames;
  m.bins = static_cast<std::size_t>(cfg.n_mels);
  m.data.resize(m.frames * m.bins);
  for (std::size_t f = 0; f < m.frames; ++f) {
    for (std::size_t b = 0; b < m.bins; ++b) {
      double energy = 0.0;
      const auto& weights = bank[b];
      for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] != 0.0) energy += weights[k] * power[f][k];
      }
      m.at(f, b) = std::log(std::max(energy, cfg.log_floor));
    }
  }
  return m;
}

Embedding baseline_embed(const FeatureMatrix& features) {
  if (features.kind != FeatureKind::kLogMel) {
    throw Error(kModule, "baseline_embed expects log-mel features");
  }
  if (features.frames < 2) {
    throw Error(kModule,
                "baseline_embed needs at least 2 frames (standard deviation "
                "is undefined on one)");
  }
  const std::size_t bands = features.bins;
  const std::size_t frames = features.frames;

  double grand_mean = 0.0;
  for (double v : features.data) grand_mean += v;
  grand_mean /= static_cast<double>(features.data.size());

  Embedding e;
  e.source = EmbeddingSource::kBaseline;
  e.values.resize(2 * bands);
  for (std::size_t b = 0; b < bands; ++b) {
    double mean = 0.0;
    for (std::size_t f = 0; f < frames; ++f) mean += features.at(f, b);
    mean /= static_cast<double>(frames);
    double var = 0.0;
    for (std::size_t f = 0; f < frames; ++f) {
      const double d = features.at(f, b) - mean;
      var += d * d;
    }
    var /= static_cast<double>(frames);  // population variance: duplication-safe
    e.values[b] = mean - grand_mean;
    e.values[bands + b] = std::sqrt(var);
  }
  return e;
}

std::string serialize_features(const FeatureMatrix& m, char delimiter) {
  std::vector<std::string> header;
  header.reserve(m.bins);
  for (std::size_t b = 0; b < m.bins; ++b) {
    header.push_back("b" + std::to_string(b));
  }
  std::string out = join_fields(header, delimiter, kModule);
  out.push_back('\n');
  std::vector<std::string> fields(m.bins);
  for (std::size_t f = 0; f < m.frames; ++f) {
    for (std::size_t b = 0; b < m.bins; ++b) {
      fields[b] = format_general(m.at(f, b));
    }
    out += join_fields(fields, delimiter, kModule);
    out.push_back('\n');
  }
  return out;
}

FeatureMatrix parse_features(const std::string& text, FeatureKind kind,
                             char delimiter) {
  DelimitedTable table = parse_delimited(text, delimiter, kModule);
  FeatureMatrix m;
  m.kind = kind;
  m.bins = table.header.size();
  m.frames = table.rows.size();
  m.data.reserve(m.frames * m.bins);
  for (const auto& row : table.rows) {
    if (row.size() != m.bins) {
      throw Error(kModule, "ragged feature row: expected " +
                               std::to_string(m.bins) + " bins, got " +
                               std::to_string(row.size()));
    }
    for (const auto& cell : row) {
      m.data.push_back(parse_double_strict(cell, kModule, "feature value"));
    }
  }
  return m;
}

}  // namespace fairsv
