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

#ifndef PESQ_AUDIO_SIGNAL_HPP_
#define PESQ_AUDIO_SIGNAL_HPP_

#include <Eigen/Core>

namespace pesq {

// Sample matrix is frames x channels, values in 16-bit full scale
// (a full-scale sine peaks at 32767).
class AudioSignal {
 public:
  AudioSignal() = default;
  AudioSignal(Eigen::ArrayXXd samples, int rate);

  static AudioSignal mono(Eigen::ArrayXd samples, int rate);

  int rate() const { return rate_; }
  Eigen::Index channels() const { return samples_.cols(); }
  Eigen::Index frames() const { return samples_.rows(); }
  double duration() const {
    return rate_ > 0 ? static_cast<double>(frames()) / rate_ : 0.0;
  }

  const Eigen::ArrayXXd& samples() const { return samples_; }
  Eigen::ArrayXXd& samples() { return samples_; }

  auto channel(Eigen::Index c) const { return samples_.col(c); }

 private:
  Eigen::ArrayXXd samples_;
  int rate_ = 0;
};

}  // namespace pesq

#endif  // PESQ_AUDIO_SIGNAL_HPP_
