// Copyright 2026 The pesqkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PESQ_SIGNAL_IO_HPP_
#define PESQ_SIGNAL_IO_HPP_

#include <filesystem>
#include <vector>

#include "pesq/audio_signal.hpp"

namespace pesq {

inline constexpr int kMaxChannels = 8;
inline constexpr double kMinDuration = 0.25;
inline constexpr double kMaxDuration = 64.0;

enum class WavEncoding { kPcm16, kFloat32 };

AudioSignal read_wav(const std::filesystem::path& path);

// PCM16 output is rounded and saturated to the int16 range; float32 output
// is divided by 32768.
void write_wav(const std::filesystem::path& path, const AudioSignal& signal,
               WavEncoding encoding = WavEncoding::kPcm16);

AudioSignal downmix_mono(const AudioSignal& signal);

// Rate is left untouched, so the result plays back channels() times longer.
AudioSignal interleave(const AudioSignal& signal);

std::vector<AudioSignal> split_channels(const AudioSignal& signal);
AudioSignal join_channels(const std::vector<AudioSignal>& channels);

// Throws unless the rate is 8000 or 16000 and the duration is within
// [kMinDuration, kMaxDuration].
void validate_for_scoring(const AudioSignal& signal);

}  // namespace pesq

#endif  // PESQ_SIGNAL_IO_HPP_
