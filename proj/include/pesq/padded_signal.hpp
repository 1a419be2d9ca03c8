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

#ifndef PESQ_PADDED_SIGNAL_HPP_
#define PESQ_PADDED_SIGNAL_HPP_

#include <Eigen/Core>

#include "pesq/config.hpp"

namespace pesq {

// Mono working buffer: guard zeros, samples, guard zeros, then tail zeros.
// `length` counts both guards but not the tail; data.size() == length + tail.
struct PaddedSignal {
  Eigen::ArrayXd data;
  Eigen::Index length = 0;

  Eigen::Index num_samples(const RateParams& p) const {
    return length - 2 * p.guard();
  }
};

PaddedSignal pad(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                 const RateParams& p);

// Zero-extends the buffer so that data.size() == length + tail; `length`
// itself is kept.
void extend_to(PaddedSignal& s, Eigen::Index length, const RateParams& p);

}  // namespace pesq

#endif  // PESQ_PADDED_SIGNAL_HPP_
