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

#include "gaborlens/synth.hpp"

#include <cmath>
#include <numbers>

#include "gaborlens/error.hpp"
#include "gaborlens/rng.hpp"

namespace gaborlens {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Event centers/widths as cycle fractions. Kept well inside the windows
// declared in the header so that +-1% timing jitter cannot leak a tail
// into a neighboring window.
constexpr double kS1Center = 0.09, kS1Sigma = 0.008;
constexpr double kS2Center = 0.50, kS2Sigma = 0.007;
constexpr double kMurmurBegin = 0.18, kMurmurEnd = 0.41;  // systolic murmurs
constexpr double kMsBegin = 0.62, kMsEnd = 0.86;          // diastolic murmur
constexpr double kClickCenter = 0.28, kClickSigma = 0.0045;
constexpr double kMvpLateBegin = 0.30, kMvpLateEnd = 0.41;

constexpr double kS1Amp = 1.0, kS2Amp = 0.8;
constexpr double kAsAmp = 0.45, kMrAmp = 0.35, kMsAmp = 0.40;
constexpr double kClickAmp = 0.9, kMvpLateAmp = 0.40;
constexpr double kNoiseSigma = 0.01;
constexpr double kTimingJitter = 0.005;  // of one cycle
constexpr int kBandComponents = 6;

// Valve-closure resonance: every class rings after S2 with a narrowband
// tone that decays through diastole (time constant in cycle fractions).
constexpr double kRingHz = 40.0;
constexpr double kRingAmp = 0.80;
constexpr double kRingDecay = 0.23;
constexpr double kRingAttack = 0.02;  // onset ramp, cycle fractions

struct BandNoise {
  // Band-limited "noise" as a deterministic sum of seeded cosines.
  std::vector<double> freq_hz;
  std::vector<double> phase;

  BandNoise(double lo_hz, double hi_hz, Rng& rng) {
    freq_hz.resize(kBandComponents);
    phase.resize(kBandComponents);
    const double step = (hi_hz - lo_hz) / kBandComponents;
    for (int k = 0; k < kBandComponents; ++k) {
      freq_hz[k] = lo_hz + step * (k + 0.5) + rng.uniform(-0.4, 0.4) * step;
      phase[k] = rng.uniform(0.0, kTwoPi);
    }
  }

  double value(double t_sec) const {
    double acc = 0.0;
    for (int k = 0; k < kBandComponents; ++k)
      acc += std::cos(kTwoPi * freq_hz[k] * t_sec + phase[k]);
    // Component RMS is 1/sqrt(2); normalize the sum to unit RMS.
    return acc / std::sqrt(kBandComponents / 2.0);
  }
};

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

// Flat envelope with 15% raised edges over [a, b] (cycle fractions).
double flat_envelope(double f, double a, double b) {
  if (f <= a || f >= b) return 0.0;
  const double edge = 0.15 * (b - a);
  const double up = smoothstep((f - a) / edge);
  const double down = smoothstep((b - f) / edge);
  return std::min(up, down);
}

double diamond_envelope(double f, double a, double b) {
  if (f <= a || f >= b) return 0.0;
  const double mid = 0.5 * (a + b);
  return 1.0 - std::abs(f - mid) / (mid - a);
}

double crescendo_envelope(double f, double a, double b) {
  if (f <= a || f >= b) return 0.0;
  const double x = (f - a) / (b - a);
  return x * smoothstep((b - f) / (0.15 * (b - a)));  // ramp up, quick release
}

std::size_t clamp_index(double v, std::size_t length) {
  if (v < 0.0) return 0;
  const std::size_t idx = static_cast<std::size_t>(v);
  return idx > length ? length : idx;
}

}  // namespace

SynthSchedule synth_schedule(std::size_t length, std::size_t cycle_len,
                             double sample_rate) {
  if (length == 0 || cycle_len == 0)
    throw PreconditionError("synth_schedule: zero length");
  SynthSchedule s;
  s.length = length;
  s.cycle_len = cycle_len;
  s.sample_rate = sample_rate;
  const double c = static_cast<double>(cycle_len);
  for (std::size_t start = 0; start < length; start += cycle_len) {
    const double s0 = static_cast<double>(start);
    CycleWindows w;
    w.s1_begin = clamp_index(s0 + kS1WindowBegin * c, length);
    w.s1_end = clamp_index(s0 + kS1WindowEnd * c, length);
    w.systole_begin = clamp_index(s0 + kSystoleBegin * c, length);
    w.systole_end = clamp_index(s0 + kSystoleEnd * c, length);
    w.s2_begin = clamp_index(s0 + kS2WindowBegin * c, length);
    w.s2_end = clamp_index(s0 + kS2WindowEnd * c, length);
    w.diastole_begin = clamp_index(s0 + kDiastoleBegin * c, length);
    w.diastole_end = clamp_index(s0 + kDiastoleEnd * c, length);
    s.cycles.push_back(w);
  }
  return s;
}

Recording synth_pcg_at(ClassLabel label, std::size_t length,
                       std::size_t cycle_len, double sample_rate,
                       std::uint64_t seed) {
  if (length == 0 || cycle_len == 0 || cycle_len > length)
    throw PreconditionError("synth_pcg: bad geometry");
  if (sample_rate <= 0.0)
    throw PreconditionError("synth_pcg: sample_rate must be > 0");

  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label), 0x5ca1ab1e));
  Recording rec;
  rec.sample_rate = sample_rate;
  rec.label = label;
  rec.samples.assign(length, 0.0);

  // Per-recording murmur textures (shared across cycles, like a real
  // murmur's timbre) drawn first so the draw order is layout-independent.
  BandNoise as_noise(kAsBandLoHz, kAsBandHiHz, rng);
  BandNoise mr_noise(kMrBandLoHz, kMrBandHiHz, rng);
  BandNoise ms_noise(kMsBandLoHz, kMsBandHiHz, rng);
  BandNoise mvp_noise(kMvpBandLoHz, kMvpBandHiHz, rng);

  const double c = static_cast<double>(cycle_len);
  const std::size_t n_cycles = (length + cycle_len - 1) / cycle_len;

  // Event morphology repeats beat to beat (the same valves close the same
  // way), so carrier phases are a per-recording draw; only timing and
  // amplitude wobble cycle to cycle.
  const double s1_phase = rng.uniform(0.0, kTwoPi);
  const double s2_phase = rng.uniform(0.0, kTwoPi);
  const double ring_phase = rng.uniform(0.0, kTwoPi);
  const double click_phase = rng.uniform(0.0, kTwoPi);

  auto add_tone_burst = [&](std::size_t cycle_start, double center,
                            double sigma, double amp, double carrier_hz,
                            double phase) {
    const double mu = cycle_start + center * c;
    const double sd = sigma * c;
    const long lo = std::lround(mu - 4.0 * sd), hi = std::lround(mu + 4.0 * sd);
    for (long n = std::max(lo, 0L);
         n <= std::min(hi, static_cast<long>(length) - 1); ++n) {
      const double t = (n - mu) / sd;
      const double env = std::exp(-0.5 * t * t);
      const double ph = kTwoPi * carrier_hz * (n - mu) / sample_rate + phase;
      rec.samples[static_cast<std::size_t>(n)] += amp * env * std::cos(ph);
    }
  };

  auto add_ring = [&](std::size_t cycle_start, double center, double amp,
                      double phase) {
    const double mu = cycle_start + center * c;
    const double tau = kRingDecay * c;
    const double release_at = cycle_start + kDiastoleEnd * c;
    const long lo = std::lround(mu);
    const long hi = std::lround(release_at);
    for (long n = std::max(lo, 0L);
         n <= std::min(hi, static_cast<long>(length) - 1); ++n) {
      const double dt = n - mu;
      if (dt < 0.0) continue;
      const double env = std::exp(-dt / tau) *
                         smoothstep(dt / (kRingAttack * c)) *
                         smoothstep((release_at - n) / (0.06 * c));
      const double ph = kTwoPi * kRingHz * dt / sample_rate + phase;
      rec.samples[static_cast<std::size_t>(n)] += amp * env * std::cos(ph);
    }
  };

  auto add_murmur = [&](std::size_t cycle_start, double begin, double end,
                        double amp, const BandNoise& noise, auto&& envelope) {
    const long lo = std::lround(cycle_start + begin * c);
    const long hi = std::lround(cycle_start + end * c);
    for (long n = std::max(lo, 0L);
         n <= std::min(hi, static_cast<long>(length) - 1); ++n) {
      const double f = (n - static_cast<double>(cycle_start)) / c;
      const double env = envelope(f);
      if (env <= 0.0) continue;
      rec.samples[static_cast<std::size_t>(n)] +=
          amp * env * noise.value(n / sample_rate);
    }
  };

  for (std::size_t cy = 0; cy < n_cycles; ++cy) {
    const std::size_t start = cy * cycle_len;
    const double jt = rng.uniform(-kTimingJitter, kTimingJitter);
    const double s1_amp = kS1Amp * rng.uniform(0.92, 1.08);
    const double s2_amp = kS2Amp * rng.uniform(0.92, 1.08);
    const double murmur_amp_scale = rng.uniform(0.92, 1.08);

    add_tone_burst(start, kS1Center + jt, kS1Sigma, s1_amp, kS1CarrierHz,
                   s1_phase);
    add_tone_burst(start, kS2Center + jt, kS2Sigma, s2_amp, kS2CarrierHz,
                   s2_phase);
    add_ring(start, kS2Center + jt, kRingAmp * s2_amp, ring_phase);

    switch (label) {
      case ClassLabel::kN:
        break;
      case ClassLabel::kAS:
        add_murmur(start, kMurmurBegin + jt, kMurmurEnd + jt,
                   kAsAmp * murmur_amp_scale, as_noise, [&](double f) {
                     return diamond_envelope(f, kMurmurBegin + jt,
                                             kMurmurEnd + jt);
                   });
        break;
      case ClassLabel::kMR:
        add_murmur(start, kMurmurBegin + jt, kMurmurEnd + jt,
                   kMrAmp * murmur_amp_scale, mr_noise, [&](double f) {
                     return flat_envelope(f, kMurmurBegin + jt, kMurmurEnd + jt);
                   });
        break;
      case ClassLabel::kMS:
        add_murmur(start, kMsBegin + jt, kMsEnd + jt,
                   kMsAmp * murmur_amp_scale, ms_noise, [&](double f) {
                     return crescendo_envelope(f, kMsBegin + jt, kMsEnd + jt);
                   });
        break;
      case ClassLabel::kMVP: {
        add_tone_burst(start, kClickCenter + jt, kClickSigma,
                       kClickAmp * murmur_amp_scale, kMvpClickHz, click_phase);
        add_murmur(start, kMvpLateBegin + jt, kMvpLateEnd + jt,
                   kMvpLateAmp * murmur_amp_scale, mvp_noise, [&](double f) {
                     return crescendo_envelope(f, kMvpLateBegin + jt,
                                               kMvpLateEnd + jt);
                   });
        break;
      }
    }
  }

  for (std::size_t n = 0; n < length; ++n)
    rec.samples[n] += kNoiseSigma * rng.normal();

  return standardize(rec);
}

Recording synth_pcg(ClassLabel label, int n_exponent, std::uint64_t seed) {
  if (n_exponent < 3 || n_exponent > 24)
    throw PreconditionError("synth_pcg: n_exponent out of range");
  const std::size_t length = std::size_t{1} << n_exponent;
  return synth_pcg_at(label, length, length / 4, 1000.0, seed);
}

}  // namespace gaborlens
