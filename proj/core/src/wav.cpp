// Copyright 2026 The gaborlens authors
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

#include "gaborlens/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "gaborlens/error.hpp"

namespace gaborlens {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

}  // namespace

Recording load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError(path.string() + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size())
      throw FormatError(path.string() + ": truncated chunk");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError(path.string() + ": short fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw FormatError(path.string() + ": missing fmt or data chunk");
  if (channels == 0) throw FormatError(path.string() + ": zero channels");
  if (format != kFormatPcm && format != kFormatFloat)
    throw UnsupportedError(path.string() + ": unsupported encoding tag " +
                           std::to_string(format));
  if (format == kFormatPcm && bits != 8 && bits != 16 && bits != 24)
    throw UnsupportedError(path.string() + ": unsupported PCM depth " +
                           std::to_string(bits));
  if (format == kFormatFloat && bits != 32)
    throw UnsupportedError(path.string() + ": unsupported float depth " +
                           std::to_string(bits));

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame = bytes_per_sample * channels;
  const std::size_t n_frames = data_len / frame;

  Recording rec;
  rec.sample_rate = static_cast<double>(rate);
  rec.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      const unsigned char* s = data + i * frame + ch * bytes_per_sample;
      double v = 0.0;
      if (format == kFormatFloat) {
        float f;
        std::memcpy(&f, s, 4);
        v = static_cast<double>(f);
      } else if (bits == 8) {
        v = (static_cast<int>(s[0]) - 128) / 128.0;  // 8-bit PCM is unsigned
      } else if (bits == 16) {
        const std::int16_t raw = static_cast<std::int16_t>(s[0] | (s[1] << 8));
        v = raw / 32768.0;
      } else {  // 24-bit
        std::int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
        if (raw & 0x800000) raw |= ~0xffffff;  // sign extend
        v = raw / 8388608.0;
      }
      acc += v;
    }
    rec.samples[i] = acc / channels;
  }
  return rec;
}

void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples, double sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());

  const std::uint32_t n = static_cast<std::uint32_t>(samples.size());
  const std::uint32_t data_size = n * 2;
  const std::uint32_t rate = static_cast<std::uint32_t>(sample_rate);
  const std::uint32_t byte_rate = rate * 2;

  auto put_u32 = [&](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  auto put_u16 = [&](std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 2);
  };

  out.write("RIFF", 4);
  put_u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);  // mono
  put_u32(rate);
  put_u32(byte_rate);
  put_u16(2);   // block align
  put_u16(16);  // bits
  out.write("data", 4);
  put_u32(data_size);
  for (double v : samples) {
    const double clamped = std::clamp(v, -1.0, 1.0);
    const int scaled = static_cast<int>(std::lrint(clamped * 32767.0));
    put_u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace gaborlens
