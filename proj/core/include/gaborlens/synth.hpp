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

#ifndef GABORLENS_SYNTH_HPP_
#define GABORLENS_SYNTH_HPP_

#include <cstdint>
#include <vector>

#include "gaborlens/signal_prep.hpp"

namespace gaborlens {

// Cycle-relative event layout of the generator, as fractions of one cardiac
// cycle. The four windows partition the cycle up to 0.88; the remainder is
// quiet run-out. Exposed so tests can window energies without duplicating
// the generator's constants.
inline constexpr double kS1WindowBegin = 0.00;
inline constexpr double kS1WindowEnd = 0.17;
inline constexpr double kSystoleBegin = 0.17;
inline constexpr double kSystoleEnd = 0.42;
inline constexpr double kS2WindowBegin = 0.42;
inline constexpr double kS2WindowEnd = 0.58;
inline constexpr double kDiastoleBegin = 0.58;
inline constexpr double kDiastoleEnd = 0.88;

// Tone/band placement (Hz at the recording's sample rate).
inline constexpr double kS1CarrierHz = 55.0;
inline constexpr double kS2CarrierHz = 75.0;
inline constexpr double kAsBandLoHz = 170.0, kAsBandHiHz = 210.0;
inline constexpr double kMrBandLoHz = 105.0, kMrBandHiHz = 150.0;
inline constexpr double kMsBandLoHz = 45.0, kMsBandHiHz = 90.0;
inline constexpr double kMvpClickHz = 230.0;
inline constexpr double kMvpBandLoHz = 150.0, kMvpBandHiHz = 190.0;

struct CycleWindows {
  std::size_t s1_begin, s1_end;
  std::size_t systole_begin, systole_end;
  std::size_t s2_begin, s2_end;
  std::size_t diastole_begin, diastole_end;
};

struct SynthSchedule {
  std::size_t length = 0;
  std::size_t cycle_len = 0;
  double sample_rate = 0.0;
  std::vector<CycleWindows> cycles;
};

// Nominal (jitter-free) window positions for a signal of the given geometry.
SynthSchedule synth_schedule(std::size_t length, std::size_t cycle_len,
                             double sample_rate);

// Deterministic synthetic phonocardiogram, standardized, with cycle_len
// samples per cardiac cycle. Class templates:
//   N   - S1/S2 Gaussian tone bursts only
//   AS  - adds a mid-systolic diamond-envelope band-noise murmur
//   MR  - adds a flat systolic murmur starting right after S1
//   MS  - adds a mid-diastolic crescendo murmur
//   MVP - adds a mid-systolic click plus a late-systolic murmur
Recording synth_pcg_at(ClassLabel label, std::size_t length,
                       std::size_t cycle_len, double sample_rate,
                       std::uint64_t seed);

// Two cardiac cycles over 2^n_exponent samples at 1 kHz.
Recording synth_pcg(ClassLabel label, int n_exponent, std::uint64_t seed);

}  // namespace gaborlens

#endif  // GABORLENS_SYNTH_HPP_
