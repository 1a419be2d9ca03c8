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

#include "pesq/audio_signal.hpp"

#include <utility>

#include "pesq/error.hpp"

namespace pesq {

AudioSignal::AudioSignal(Eigen::ArrayXXd samples, int rate)
    : samples_(std::move(samples)), rate_(rate) {
  if (samples_.cols() < 1) {
    throw Error(ErrorCode::kUnsupportedChannels,
                "signal must have at least one channel");
  }
}

AudioSignal AudioSignal::mono(Eigen::ArrayXd samples, int rate) {
  return AudioSignal(Eigen::ArrayXXd(std::move(samples)), rate);
}

}  // namespace pesq
