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

#include "fairsv/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fairsv/error.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "acoustic";

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0]) |
         static_cast<std::uint16_t>(p[1] << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kModule, "cannot open wav file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(kModule, "not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  std::uint16_t audio_format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* chunk_id = reinterpret_cast<const char*>(bytes.data() + pos);
    std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      throw Error(kModule, "truncated chunk in wav file: " + path.string());
    }
    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw Error(kModule, "malformed fmt chunk");
      audio_format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word aligned
  }

  if (!have_fmt || data == nullptr) {
    throw Error(kModule, "wav file lacks fmt/data chunks: " + path.string());
  }
  if (audio_format != 1) {
    throw Error(kModule, "unsupported codec (only PCM, format tag " +
                             std::to_string(audio_format) + "): " +
                             path.string());
  }
  if (bits != 8 && bits != 16) {
    throw Error(kModule, "unsupported PCM depth " + std::to_string(bits) +
                             " (expected 8 or 16): " + path.string());
  }
  if (channels == 0) throw Error(kModule, "wav file reports zero channels");
  if (sample_rate == 0) throw Error(kModule, "wav file reports zero sample rate");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  const std::size_t n_frames = data_size / frame_size;
  if (n_frames == 0) throw Error(kModule, "zero-length audio: " + path.string());

  Waveform wave;
  wave.sample_rate = static_cast<int>(sample_rate);
  wave.samples.resize(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + f * frame_size + c * bytes_per_sample;
      if (bits == 16) {
        std::int16_t v =
            static_cast<std::int16_t>(read_u16(p));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        acc += (static_cast<double>(*p) - 128.0) / 128.0;
      }
    }
    wave.samples[f] = acc / channels;
  }

  if (wave.sample_rate != kTargetSampleRate) {
    wave = resample_linear(wave, kTargetSampleRate);
  }
  return wave;
}

Waveform resample_linear(const Waveform& wave, int target_rate) {
  if (target_rate <= 0) throw Error(kModule, "target rate must be positive");
  if (wave.samples.empty()) throw Error(kModule, "cannot resample empty audio");
  if (wave.sample_rate == target_rate) return wave;

  const std::size_t n_in = wave.samples.size();
  const std::size_t n_out = static_cast<std::size_t>(std::llround(
      static_cast<double>(n_in) * target_rate / wave.sample_rate));
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(std::max<std::size_t>(n_out, 1));
  const double step = static_cast<double>(wave.sample_rate) / target_rate;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double src = i * step;
    const std::size_t lo = std::min(static_cast<std::size_t>(src), n_in - 1);
    const std::size_t hi = std::min(lo + 1, n_in - 1);
    const double frac = src - static_cast<double>(lo);
    out.samples[i] =
        wave.samples[lo] * (1.0 - frac) + wave.samples[hi] * frac;
  }
  return out;
}

void write_wav_pcm16(const std::filesystem::path& path, const Waveform& wave) {
  if (wave.samples.empty()) throw Error(kModule, "refusing to write empty audio");
  std::string out;
  const std::uint32_t n = static_cast<std::uint32_t>(wave.samples.size());
  const std::uint32_t data_size = n * 2;
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_size);
  for (double s : wave.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const int v = static_cast<int>(std::lround(clamped * 32767.0));
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(kModule, "cannot open for writing: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(kModule, "write failed: " + path.string());
}

}  // namespace fairsv
