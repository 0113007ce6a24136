// Copyright 2026 The qisep authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qisep/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qisep {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("read_wav(" + path + "): " + what);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0) {
    fail(path, "missing RIFF header");
  }
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(path, "missing WAVE tag");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t size = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      fail(path, std::string("truncated '") + std::string(id, 4) + "' chunk");
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) fail(path, "truncated 'fmt ' chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size % 2);  // chunks are word-aligned
  }

  if (!have_fmt) fail(path, "missing 'fmt ' chunk");
  if (data == nullptr) fail(path, "missing 'data' chunk");
  if (channels != 1 && channels != 2) {
    fail(path, "unsupported channel count " + std::to_string(channels));
  }

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    fail(path, "unsupported encoding (format " + std::to_string(format) +
                   ", " + std::to_string(bits) + " bit)");
  }

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = data_size / frame_bytes;

  WavData out;
  out.sample_rate = sample_rate;
  out.samples.resize(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const unsigned char* p = data + f * frame_bytes + ch * bytes_per_sample;
      double v;
      if (pcm16) {
        const std::int16_t raw =
            static_cast<std::int16_t>(read_u16(p));
        v = static_cast<double>(raw) / 32767.0;
      } else {
        float raw;
        std::memcpy(&raw, p, 4);
        v = static_cast<double>(raw);
      }
      acc += v;
    }
    out.samples[f] = std::clamp(acc / channels, -1.0, 1.0);
  }
  return out;
}

void write_wav(const std::string& path, const std::vector<double>& samples,
               std::uint32_t sample_rate) {
  const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);

  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);  // mono
  put_u32(out, sample_rate);
  put_u32(out, sample_rate * 2);  // byte rate
  put_u16(out, 2);                // block align
  put_u16(out, 16);               // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);

  for (double s : samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
    put_u16(out, static_cast<std::uint16_t>(q));
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("write_wav(" + path + "): cannot open for write");
  }
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) {
    throw std::runtime_error("write_wav(" + path + "): short write");
  }
}

}  // namespace qisep
