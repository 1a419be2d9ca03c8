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

#include "pesq/multichannel.hpp"

#include <numeric>
#include <string>

#include "pesq/error.hpp"
#include "pesq/pesq.hpp"
#include "pesq/signal_io.hpp"

namespace pesq {

std::string_view strategy_name(StereoStrategy s) {
  switch (s) {
    case StereoStrategy::kMonoDownmix: return "dmx";
    case StereoStrategy::kAverageScores: return "avg";
    case StereoStrategy::kPerChannel: return "per-channel";
    case StereoStrategy::kInterleave: return "interleave";
  }
  return "";
}

std::optional<StereoStrategy> parse_strategy(std::string_view name) {
  for (StereoStrategy s : {StereoStrategy::kMonoDownmix, StereoStrategy::kAverageScores,
                           StereoStrategy::kPerChannel, StereoStrategy::kInterleave}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

MultichannelScore score_multichannel(const AudioSignal& ref, const AudioSignal& deg,
                                     const PesqConfig& cfg, StereoStrategy strategy) {
  if (ref.channels() != deg.channels()) {
    throw Error(ErrorCode::kChannelMismatch,
                "reference has " + std::to_string(ref.channels()) +
                    " channels, degraded has " + std::to_string(deg.channels()));
  }
  if (ref.rate() != deg.rate()) {
    throw Error(ErrorCode::kRateMismatch, "reference and degraded rates differ");
  }
  auto score = [&cfg](const AudioSignal& r, const AudioSignal& d) {
    return headline_score(compute_pesq(r, d, cfg), cfg);
  };

  MultichannelScore out;
  switch (strategy) {
    case StereoStrategy::kMonoDownmix:
      out.score = score(downmix_mono(ref), downmix_mono(deg));
      break;
    case StereoStrategy::kInterleave:
      if (ref.channels() < 2) {
        throw Error(ErrorCode::kInvalidArgument, "interleave needs multi-channel input");
      }
      out.score = score(interleave(ref), interleave(deg));
      break;
    case StereoStrategy::kAverageScores:
    case StereoStrategy::kPerChannel: {
      const auto r = split_channels(ref);
      const auto d = split_channels(deg);
      for (std::size_t c = 0; c < r.size(); ++c) out.per_channel.push_back(score(r[c], d[c]));
      out.score = std::accumulate(out.per_channel.begin(), out.per_channel.end(), 0.0) /
                  static_cast<double>(out.per_channel.size());
      break;
    }
  }
  return out;
}

}  // namespace pesq
