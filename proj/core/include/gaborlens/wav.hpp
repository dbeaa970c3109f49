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

#ifndef GABORLENS_WAV_HPP_
#define GABORLENS_WAV_HPP_

#include <filesystem>

#include "gaborlens/signal_prep.hpp"

namespace gaborlens {

// Reads a RIFF/WAVE file. Supported encodings: PCM 8/16/24-bit integer and
// 32-bit float, little-endian. Multichannel input is averaged to mono.
// Samples are scaled to [-1, 1). Unknown chunks are skipped.
Recording load_wav(const std::filesystem::path& path);

// Writes mono 16-bit PCM. Samples are clamped to [-1, 1].
void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples, double sample_rate);

}  // namespace gaborlens

#endif  // GABORLENS_WAV_HPP_
