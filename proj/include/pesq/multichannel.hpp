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

#ifndef PESQ_MULTICHANNEL_HPP_
#define PESQ_MULTICHANNEL_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "pesq/audio_signal.hpp"
#include "pesq/config.hpp"

namespace pesq {

enum class StereoStrategy { kMonoDownmix, kAverageScores, kPerChannel, kInterleave };

inline constexpr StereoStrategy kDefaultStrategy = StereoStrategy::kMonoDownmix;

// Command-line names: dmx, avg, per-channel, interleave.
std::string_view strategy_name(StereoStrategy s);
std::optional<StereoStrategy> parse_strategy(std::string_view name);

inline constexpr std::string_view kInterleaveNotice =
    "note: interleave reproduces the reference code's multi-channel reading, "
    "which is likely unintentional behaviour; scores are not comparable to "
    "mono scoring";

struct MultichannelScore {
  double score = 0.0;
  std::vector<double> per_channel;  // filled for avg and per-channel
};

// Headline score of cfg (raw for nb-raw, MOS-LQO otherwise) under `strategy`.
MultichannelScore score_multichannel(const AudioSignal& ref, const AudioSignal& deg,
                                     const PesqConfig& cfg, StereoStrategy strategy);

}  // namespace pesq

#endif  // PESQ_MULTICHANNEL_HPP_
