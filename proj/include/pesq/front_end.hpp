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

#ifndef PESQ_FRONT_END_HPP_
#define PESQ_FRONT_END_HPP_

#include <array>

#include "pesq/audio_signal.hpp"
#include "pesq/config.hpp"
#include "pesq/dsp.hpp"
#include "pesq/padded_signal.hpp"

namespace pesq {

inline constexpr double kTargetLevel = 1e7;

// Gain bringing the 350-3250 Hz power of `s` to kTargetLevel. Power is
// averaged over the sample span of the longer signal of the pair.
double level_gain(const PaddedSignal& s, Eigen::Index max_length,
                  const RateParams& p, RealFft& fft);

struct LevelAlignment {
  AudioSignal ref;
  AudioSignal deg;
  double ref_gain;
  double deg_gain;
};

LevelAlignment fix_levels(const AudioSignal& ref, const AudioSignal& deg,
                          const PesqConfig& cfg);

// Single second-order section {b0, b1, b2, a1, a2} of the wideband
// high-pass; the corrected set scales the numerator by -12 dB.
std::array<double, 5> wideband_section(bool corrigendum2);

// Handset response for narrowband, the wideband high-pass otherwise.
void input_filter(PaddedSignal& s, const PesqConfig& cfg, RealFft& fft);

// Same filter applied to an unpadded mono signal; the output keeps the
// input length.
AudioSignal input_filter(const AudioSignal& s, const PesqConfig& cfg);

}  // namespace pesq

#endif  // PESQ_FRONT_END_HPP_
