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

#ifndef PESQ_PESQ_HPP_
#define PESQ_PESQ_HPP_

#include <optional>
#include <span>
#include <string_view>

#include "pesq/alignment.hpp"
#include "pesq/audio_signal.hpp"
#include "pesq/config.hpp"

namespace pesq {

struct PesqResult {
  std::optional<double> raw;      // clamped to [-0.5, 4.5]
  std::optional<double> mos_lqo;
  // Unclamped value fed to the MOS-LQO mapping.
  double internal = 0.0;
  double d_sym = 0.0;
  double d_asym = 0.0;
  AlignmentResult alignment;
};

// Mono inputs at cfg.rate.
PesqResult compute_pesq(const AudioSignal& ref, const AudioSignal& deg,
                        const PesqConfig& cfg);

// Headline number of the mode: raw for nb-raw, MOS-LQO otherwise.
double headline_score(const PesqResult& result, const PesqConfig& cfg);

// Buffer entry for foreign callers. Samples in 16-bit full scale.
double score_samples(std::span<const double> ref, std::span<const double> deg,
                     int rate, Mode mode);

// Library version plus the recommendation the mode implements.
std::string_view version();

}  // namespace pesq

#endif  // PESQ_PESQ_HPP_
