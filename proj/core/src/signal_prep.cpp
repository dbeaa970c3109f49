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

#include "gaborlens/signal_prep.hpp"

#include <cmath>
#include <numbers>

#include "gaborlens/error.hpp"

namespace gaborlens {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::kN: return "N";
    case ClassLabel::kAS: return "AS";
    case ClassLabel::kMR: return "MR";
    case ClassLabel::kMS: return "MS";
    case ClassLabel::kMVP: return "MVP";
  }
  return "?";
}

std::optional<ClassLabel> parse_class_label(std::string_view text) {
  if (text == "N") return ClassLabel::kN;
  if (text == "AS") return ClassLabel::kAS;
  if (text == "MR") return ClassLabel::kMR;
  if (text == "MS") return ClassLabel::kMS;
  if (text == "MVP") return ClassLabel::kMVP;
  return std::nullopt;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

Recording clip_or_pad(const Recording& r, std::size_t raw_len) {
  if (raw_len == 0) throw PreconditionError("clip_or_pad: raw_len must be > 0");
  Recording out = r;
  out.samples.resize(raw_len, 0.0);
  return out;
}

std::vector<double> antialias_taps(int factor, int order) {
  if (factor < 1) throw PreconditionError("antialias_taps: factor must be >= 1");
  if (order < 2 || order % 2 != 0)
    throw PreconditionError("antialias_taps: order must be even and >= 2");
  const int taps = order + 1;
  const int mid = order / 2;
  const double cutoff = kPi / factor;  // rad/sample
  std::vector<double> h(taps);
  double sum = 0.0;
  for (int k = 0; k < taps; ++k) {
    const double t = k - mid;
    const double sinc = (k == mid) ? cutoff / kPi : std::sin(cutoff * t) / (kPi * t);
    const double window = 0.54 - 0.46 * std::cos(2.0 * kPi * k / order);
    h[k] = sinc * window;
    sum += h[k];
  }
  // Unit DC gain so constants pass through exactly.
  for (double& v : h) v /= sum;
  return h;
}

Recording downsample(const Recording& r, int factor, bool antialias) {
  if (factor < 1) throw PreconditionError("downsample: factor must be >= 1");
  if (r.samples.empty()) throw PreconditionError("downsample: empty signal");
  if (r.samples.size() % static_cast<std::size_t>(factor) != 0)
    throw PreconditionError("downsample: length not divisible by factor");

  const std::size_t n = r.samples.size();
  Recording out = r;
  out.sample_rate = r.sample_rate > 0.0 ? r.sample_rate / factor : 0.0;
  out.samples.clear();
  out.samples.reserve(n / static_cast<std::size_t>(factor));

  if (!antialias || factor == 1) {
    for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(factor))
      out.samples.push_back(r.samples[i]);
    return out;
  }

  const std::vector<double> h = antialias_taps(factor);
  const int mid = static_cast<int>(h.size() / 2);  // group delay of the FIR
  const auto sample_at = [&](long idx) {
    // Replicate-edge padding keeps the operation linear and DC-exact.
    if (idx < 0) return r.samples.front();
    if (idx >= static_cast<long>(n)) return r.samples.back();
    return r.samples[static_cast<std::size_t>(idx)];
  };
  // y[i*factor] with the group delay compensated:
  //   y[m] = sum_k h[k] * x[m + mid - k]
  for (std::size_t m = 0; m < n; m += static_cast<std::size_t>(factor)) {
    double acc = 0.0;
    const long base = static_cast<long>(m) + mid;
    for (std::size_t k = 0; k < h.size(); ++k)
      acc += h[k] * sample_at(base - static_cast<long>(k));
    out.samples.push_back(acc);
  }
  return out;
}

Recording standardize(const Recording& r) {
  if (r.samples.empty()) throw PreconditionError("standardize: empty signal");
  const std::size_t n = r.samples.size();
  double mean = 0.0;
  for (double v : r.samples) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : r.samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);  // population variance
  if (var <= 0.0)
    throw DegenerateInputError("standardize: constant signal");
  const double inv_sd = 1.0 / std::sqrt(var);
  Recording out = r;
  for (double& v : out.samples) v = (v - mean) * inv_sd;
  return out;
}

Recording preprocess(const Recording& r, const PreprocessConfig& cfg) {
  if (cfg.downsample_factor < 1)
    throw PreconditionError("preprocess: downsample_factor must be >= 1");
  if (cfg.raw_len % static_cast<std::size_t>(cfg.downsample_factor) != 0)
    throw PreconditionError("preprocess: raw_len not divisible by factor");
  const std::size_t out_len =
      cfg.raw_len / static_cast<std::size_t>(cfg.downsample_factor);
  if (!is_power_of_two(out_len))
    throw PreconditionError("preprocess: output length must be a power of two");
  Recording out = clip_or_pad(r, cfg.raw_len);
  out = downsample(out, cfg.downsample_factor, cfg.antialias);
  return standardize(out);
}

}  // namespace gaborlens
