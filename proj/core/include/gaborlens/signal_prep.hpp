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

#ifndef GABORLENS_SIGNAL_PREP_HPP_
#define GABORLENS_SIGNAL_PREP_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaborlens {

// Heart-valve condition classes. The integer encoding is fixed; it is used
// in manifests, binary stores and network outputs.
enum class ClassLabel : int { kN = 0, kAS = 1, kMR = 2, kMS = 3, kMVP = 4 };

inline constexpr int kNumClasses = 5;

const char* to_string(ClassLabel label);
std::optional<ClassLabel> parse_class_label(std::string_view text);

struct Recording {
  std::string id;
  std::vector<double> samples;
  double sample_rate = 0.0;
  std::optional<ClassLabel> label;
};

struct PreprocessConfig {
  std::size_t raw_len = std::size_t{1} << 14;  // clip/pad target, samples
  int downsample_factor = 8;                   // power of two
  bool antialias = true;  // low-pass before decimation; off = naive drop
};

// Truncates or zero-pads the tail so the result has exactly raw_len samples.
Recording clip_or_pad(const Recording& r, std::size_t raw_len);

// Reduces the rate by an integer factor. With antialias on, applies a
// linear-phase low-pass FIR (order 64, cutoff pi/factor) with group-delay
// compensation and replicate-edge padding, then keeps every factor-th
// sample; with antialias off, keeps every factor-th raw sample.
Recording downsample(const Recording& r, int factor, bool antialias = true);

// Shifts/scales to zero mean and unit population standard deviation.
// A constant signal is a degenerate input.
Recording standardize(const Recording& r);

// clip_or_pad -> downsample -> standardize. The resulting length
// raw_len / downsample_factor must be a power of two.
Recording preprocess(const Recording& r, const PreprocessConfig& cfg);

// The low-pass taps used by downsample(); exposed for inspection and tests.
std::vector<double> antialias_taps(int factor, int order = 64);

bool is_power_of_two(std::size_t v);

}  // namespace gaborlens

#endif  // GABORLENS_SIGNAL_PREP_HPP_
