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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "gaborlens/error.hpp"
#include "gaborlens/signal_prep.hpp"
#include "gaborlens/synth.hpp"
#include "gaborlens/wav.hpp"

using namespace gaborlens;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

void put_u32(std::string& b, std::uint32_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>((v >> 8) & 0xff));
  b.push_back(static_cast<char>((v >> 16) & 0xff));
  b.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>((v >> 8) & 0xff));
}

// Minimal WAV byte builder so the loader can be fed every encoding.
std::string wav_bytes(std::uint16_t format, std::uint16_t channels,
                      std::uint32_t rate, std::uint16_t bits,
                      const std::string& payload) {
  std::string b;
  b += "RIFF";
  put_u32(b, 36 + static_cast<std::uint32_t>(payload.size()));
  b += "WAVE";
  b += "fmt ";
  put_u32(b, 16);
  put_u16(b, format);
  put_u16(b, channels);
  put_u32(b, rate);
  put_u32(b, rate * channels * bits / 8);
  put_u16(b, static_cast<std::uint16_t>(channels * bits / 8));
  put_u16(b, bits);
  b += "data";
  put_u32(b, static_cast<std::uint32_t>(payload.size()));
  b += payload;
  return b;
}

fs::path write_bytes(const std::string& name, const std::string& bytes) {
  const fs::path p = temp_file(name);
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  return p;
}

Recording make_recording(std::vector<double> samples, double rate = 8000.0) {
  Recording r;
  r.id = "t";
  r.samples = std::move(samples);
  r.sample_rate = rate;
  return r;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("class labels round-trip through their names") {
  for (int k = 0; k < kNumClasses; ++k) {
    const ClassLabel label = static_cast<ClassLabel>(k);
    const auto parsed = parse_class_label(to_string(label));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == label);
  }
  CHECK(!parse_class_label("XX").has_value());
  CHECK(*parse_class_label("MVP") == ClassLabel::kMVP);
}

TEST_CASE("is_power_of_two") {
  CHECK(is_power_of_two(1));
  CHECK(is_power_of_two(2));
  CHECK(is_power_of_two(1024));
  CHECK(!is_power_of_two(0));
  CHECK(!is_power_of_two(3));
  CHECK(!is_power_of_two(1023));
}

TEST_CASE("wav loader reads a second of 16-bit zeros") {
  const std::string payload(8000 * 2, '\0');
  const fs::path p = write_bytes("gl_wav_zeros.wav",
                                 wav_bytes(1, 1, 8000, 16, payload));
  const Recording r = load_wav(p);
  CHECK(r.samples.size() == 8000);
  CHECK(r.sample_rate == doctest::Approx(8000.0));
  for (std::size_t i = 0; i < r.samples.size(); i += 997)
    CHECK(r.samples[i] == 0.0);
  fs::remove(p);
}

TEST_CASE("wav loader scales int16 max to 32767/32768") {
  std::string payload;
  put_u16(payload, 0x7fff);
  const fs::path p = write_bytes("gl_wav_max.wav",
                                 wav_bytes(1, 1, 8000, 16, payload));
  const Recording r = load_wav(p);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
  fs::remove(p);
}

TEST_CASE("wav loader handles 8-bit unsigned PCM") {
  std::string payload;
  payload.push_back(static_cast<char>(128));  // midpoint -> 0
  payload.push_back(static_cast<char>(255));  // max -> 127/128
  payload.push_back(static_cast<char>(0));    // min -> -1
  const fs::path p = write_bytes("gl_wav_8bit.wav",
                                 wav_bytes(1, 1, 8000, 8, payload));
  const Recording r = load_wav(p);
  REQUIRE(r.samples.size() == 3);
  CHECK(r.samples[0] == doctest::Approx(0.0));
  CHECK(r.samples[1] == doctest::Approx(127.0 / 128.0));
  CHECK(r.samples[2] == doctest::Approx(-1.0));
  fs::remove(p);
}

TEST_CASE("wav loader handles 24-bit PCM") {
  std::string payload;
  // +2^22 then -2^22: 0x400000 and its negative in two's complement.
  payload.push_back(static_cast<char>(0x00));
  payload.push_back(static_cast<char>(0x00));
  payload.push_back(static_cast<char>(0x40));
  payload.push_back(static_cast<char>(0x00));
  payload.push_back(static_cast<char>(0x00));
  payload.push_back(static_cast<char>(0xc0));
  const fs::path p = write_bytes("gl_wav_24bit.wav",
                                 wav_bytes(1, 1, 8000, 24, payload));
  const Recording r = load_wav(p);
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0] == doctest::Approx(0.5));
  CHECK(r.samples[1] == doctest::Approx(-0.5));
  fs::remove(p);
}

TEST_CASE("wav loader handles float32 and averages channels") {
  std::string payload;
  const float values[4] = {0.25f, 0.75f, -1.0f, 1.0f};  // two stereo frames
  payload.append(reinterpret_cast<const char*>(values), sizeof(values));
  const fs::path p = write_bytes("gl_wav_f32.wav",
                                 wav_bytes(3, 2, 4000, 32, payload));
  const Recording r = load_wav(p);
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0] == doctest::Approx(0.5));
  CHECK(r.samples[1] == doctest::Approx(0.0));
  fs::remove(p);
}

TEST_CASE("wav loader rejects the extensible encoding as unsupported") {
  const fs::path p = write_bytes(
      "gl_wav_ext.wav", wav_bytes(0xfffe, 1, 8000, 16, std::string(4, '\0')));
  CHECK_THROWS_AS(load_wav(p), UnsupportedError);
  fs::remove(p);
}

TEST_CASE("wav loader rejects truncated and malformed headers") {
  const fs::path junk = write_bytes("gl_wav_junk.wav", "RIFFxx");
  CHECK_THROWS_AS(load_wav(junk), FormatError);
  fs::remove(junk);

  // A data chunk whose declared size exceeds the file.
  std::string full = wav_bytes(1, 1, 8000, 16, std::string(64, '\0'));
  full.resize(full.size() - 32);
  const fs::path trunc = write_bytes("gl_wav_trunc.wav", full);
  CHECK_THROWS_AS(load_wav(trunc), FormatError);
  fs::remove(trunc);
}

TEST_CASE("pcm16 writer round-trips within quantization error") {
  std::vector<double> samples(256);
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = 0.9 * std::sin(0.05 * static_cast<double>(i));
  const fs::path p = temp_file("gl_wav_rt.wav");
  write_wav_pcm16(p, samples, 8000.0);
  const Recording r = load_wav(p);
  REQUIRE(r.samples.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(std::abs(r.samples[i] - samples[i]) < 1e-4);
  fs::remove(p);
}

TEST_CASE("clip_or_pad clips long and pads short inputs") {
  std::vector<double> lng(20000);
  for (std::size_t i = 0; i < lng.size(); ++i)
    lng[i] = static_cast<double>(i);
  const Recording clipped = clip_or_pad(make_recording(lng), 16384);
  REQUIRE(clipped.samples.size() == 16384);
  CHECK(clipped.samples[16383] == doctest::Approx(16383.0));

  const Recording same = clip_or_pad(clipped, 16384);
  CHECK(same.samples == clipped.samples);

  const Recording padded =
      clip_or_pad(make_recording({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), 16);
  REQUIRE(padded.samples.size() == 16);
  CHECK(padded.samples[9] == doctest::Approx(10.0));
  for (std::size_t i = 10; i < 16; ++i) CHECK(padded.samples[i] == 0.0);
}

TEST_CASE("downsample divides length and rate by the factor") {
  std::vector<double> x(16384);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(2.0 * std::numbers::pi * 40.0 * static_cast<double>(i) /
                    8000.0);
  const Recording out = downsample(make_recording(x, 8000.0), 8);
  CHECK(out.samples.size() == 2048);
  CHECK(out.sample_rate == doctest::Approx(1000.0));
}

TEST_CASE("downsample rejects an indivisible length") {
  CHECK_THROWS_AS(downsample(make_recording(std::vector<double>(100)), 8),
                  PreconditionError);
}

TEST_CASE("downsample preserves DC") {
  const Recording out =
      downsample(make_recording(std::vector<double>(4096, 0.37)), 8);
  for (double v : out.samples) CHECK(std::abs(v - 0.37) < 1e-6);
}

TEST_CASE("downsample suppresses content above the new Nyquist") {
  // 1700 Hz at 8000 Hz input, factor 8 -> new Nyquist 500 Hz.
  std::vector<double> x(8192);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(2.0 * std::numbers::pi * 1700.0 * static_cast<double>(i) /
                    8000.0);
  const double in_energy = testing::window_energy(x, 0, x.size());
  const Recording out = downsample(make_recording(x, 8000.0), 8);
  const double out_energy =
      testing::window_energy(out.samples, 0, out.samples.size());
  CHECK(out_energy < 0.01 * in_energy);
}

TEST_CASE("downsample is linear") {
  const auto xa = testing::random_vector(2048, 11);
  const auto xb = testing::random_vector(2048, 12);
  std::vector<double> a(xa.data(), xa.data() + xa.size());
  std::vector<double> b(xb.data(), xb.data() + xb.size());
  std::vector<double> combo(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) combo[i] = 2.0 * a[i] - 3.0 * b[i];

  const Recording da = downsample(make_recording(a), 4);
  const Recording db = downsample(make_recording(b), 4);
  const Recording dc = downsample(make_recording(combo), 4);
  for (std::size_t i = 0; i < dc.samples.size(); ++i)
    CHECK(std::abs(dc.samples[i] -
                   (2.0 * da.samples[i] - 3.0 * db.samples[i])) < 1e-9);
}

TEST_CASE("antialias taps are symmetric with unit DC gain") {
  const std::vector<double> taps = antialias_taps(8);
  REQUIRE(taps.size() == 65);
  double sum = 0.0;
  for (double t : taps) sum += t;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < taps.size(); ++i)
    CHECK(taps[i] == doctest::Approx(taps[taps.size() - 1 - i]));
}

TEST_CASE("standardize pinned examples") {
  const Recording ident = standardize(make_recording({1.0, -1.0}));
  CHECK(ident.samples[0] == doctest::Approx(1.0));
  CHECK(ident.samples[1] == doctest::Approx(-1.0));

  const Recording two = standardize(make_recording({0.0, 2.0}));
  CHECK(two.samples[0] == doctest::Approx(-1.0));
  CHECK(two.samples[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(standardize(make_recording({5.0, 5.0, 5.0})),
                  DegenerateInputError);
}

TEST_CASE("preprocess chain yields a standardized power-of-two signal") {
  Recording raw = synth_pcg(ClassLabel::kMR, 11, 99);
  raw.sample_rate = 8000.0;
  // Stretch to an awkward length so clip/pad matters.
  raw.samples.resize(10000, 0.1);

  PreprocessConfig cfg;
  cfg.raw_len = 16384;
  cfg.downsample_factor = 8;
  const Recording out = preprocess(raw, cfg);
  CHECK(out.samples.size() == 2048);
  CHECK(std::abs(mean_of(out.samples)) < 1e-9);
  CHECK(std::abs(pop_std_of(out.samples) - 1.0) < 1e-9);
}

TEST_CASE("preprocess of a constant signal is a degenerate-input error") {
  // Plain decimation and the factor-1 path keep a constant signal constant;
  // the antialias filter's zero-padded edges would break exact constancy.
  PreprocessConfig cfg;
  cfg.raw_len = 1024;
  cfg.downsample_factor = 4;
  cfg.antialias = false;
  CHECK_THROWS_AS(
      preprocess(make_recording(std::vector<double>(1024, 3.0)), cfg),
      DegenerateInputError);

  cfg.downsample_factor = 1;
  cfg.antialias = true;
  CHECK_THROWS_AS(
      preprocess(make_recording(std::vector<double>(1024, 3.0)), cfg),
      DegenerateInputError);
}

TEST_CASE("synth_pcg is deterministic and standardized") {
  const Recording a = synth_pcg(ClassLabel::kN, 9, 7);
  const Recording b = synth_pcg(ClassLabel::kN, 9, 7);
  CHECK(a.samples == b.samples);
  CHECK(a.samples.size() == 512);
  CHECK(std::abs(mean_of(a.samples)) < 1e-9);
  CHECK(std::abs(pop_std_of(a.samples) - 1.0) < 1e-9);
  REQUIRE(a.label.has_value());
  CHECK(*a.label == ClassLabel::kN);

  const Recording c = synth_pcg(ClassLabel::kN, 9, 8);
  CHECK(a.samples != c.samples);
}

TEST_CASE("normal cycles are quiet between S1 and S2") {
  // Long cycle at high rate so the schedule windows are well resolved.
  const std::size_t cycle = 4096;
  const Recording r = synth_pcg_at(ClassLabel::kN, 2 * cycle, cycle, 4000.0, 3);
  const SynthSchedule sched = synth_schedule(2 * cycle, cycle, 4000.0);
  REQUIRE(sched.cycles.size() >= 1);
  const CycleWindows& w = sched.cycles[0];

  const double s1 = testing::window_energy(r.samples, w.s1_begin, w.s1_end);
  // Stay clear of murmur/burst tails: probe the middle half of systole.
  const std::size_t mid_lo =
      w.systole_begin + (w.systole_end - w.systole_begin) / 4;
  const std::size_t mid_hi =
      w.systole_end - (w.systole_end - w.systole_begin) / 4;
  const double inter = testing::window_energy(r.samples, mid_lo, mid_hi);
  CHECK(inter < 0.05 * s1);
}

TEST_CASE("aortic-stenosis murmur raises systolic band energy") {
  const std::size_t cycle = 4096;
  const double rate = 4000.0;
  const Recording as =
      synth_pcg_at(ClassLabel::kAS, 2 * cycle, cycle, rate, 3);
  const Recording nn = synth_pcg_at(ClassLabel::kN, 2 * cycle, cycle, rate, 3);
  const SynthSchedule sched = synth_schedule(2 * cycle, cycle, rate);
  const CycleWindows& w = sched.cycles[0];

  const double as_frac = testing::band_energy_fraction(
      as.samples, w.systole_begin, w.systole_end, rate, kAsBandLoHz,
      kAsBandHiHz);
  const double nn_frac = testing::band_energy_fraction(
      nn.samples, w.systole_begin, w.systole_end, rate, kAsBandLoHz,
      kAsBandHiHz);
  CHECK(as_frac > nn_frac);
  CHECK(as_frac > 0.5);
}

TEST_CASE("mitral-stenosis murmur lands in diastole") {
  const std::size_t cycle = 4096;
  const double rate = 4000.0;
  const Recording ms =
      synth_pcg_at(ClassLabel::kMS, 2 * cycle, cycle, rate, 3);
  const Recording nn = synth_pcg_at(ClassLabel::kN, 2 * cycle, cycle, rate, 3);
  const SynthSchedule sched = synth_schedule(2 * cycle, cycle, rate);
  const CycleWindows& w = sched.cycles[0];

  const double ms_e =
      testing::window_energy(ms.samples, w.diastole_begin, w.diastole_end);
  const double nn_e =
      testing::window_energy(nn.samples, w.diastole_begin, w.diastole_end);
  CHECK(ms_e > 2.0 * nn_e);
}
