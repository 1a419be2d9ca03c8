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

#ifndef PESQ_ALIGNMENT_HPP_
#define PESQ_ALIGNMENT_HPP_

#include <Eigen/Core>
#include <vector>

#include "pesq/audio_signal.hpp"
#include "pesq/config.hpp"
#include "pesq/dsp.hpp"
#include "pesq/padded_signal.hpp"

namespace pesq {

// Band-limited copy of a filtered signal plus its speech-activity envelope,
// one value per `downsample` samples.
struct AlignmentTrack {
  Eigen::ArrayXd data;
  Eigen::Index length = 0;
  Eigen::ArrayXd vad;
  Eigen::ArrayXd log_vad;
};

AlignmentTrack make_alignment_track(const PaddedSignal& filtered,
                                    const RateParams& p);

// Positions below are envelope windows of the padded reference.
struct UtteranceSpan {
  Eigen::Index start = 0;
  Eigen::Index end = 0;
  Eigen::Index search_start = 0;
  Eigen::Index search_end = 0;
};

struct Utterance {
  Eigen::Index start = 0;
  Eigen::Index end = 0;
  Eigen::Index delay = 0;           // samples, positive when deg lags ref
  Eigen::Index delay_estimate = 0;  // envelope-resolution delay, samples
  double confidence = 0.0;
};

struct AlignmentResult {
  Eigen::Index crude_delay = 0;
  std::vector<Utterance> utterances;
};

Eigen::Index estimate_crude_delay(const AlignmentTrack& ref,
                                  const AlignmentTrack& deg,
                                  const RateParams& p, RealFft& fft);

// Active stretches of the reference at least 50 windows long that overlap
// the degraded signal once shifted by the crude delay.
std::vector<UtteranceSpan> detect_utterances(const AlignmentTrack& ref,
                                             Eigen::Index deg_length,
                                             Eigen::Index crude_delay,
                                             const RateParams& p);

AlignmentResult align_utterances(const AlignmentTrack& ref,
                                 const AlignmentTrack& deg,
                                 Eigen::Index crude_delay,
                                 const std::vector<UtteranceSpan>& spans,
                                 const RateParams& p, RealFft& fft);

// Index of the histogram peak mapped to a signed delay in [-n/2, n/2);
// ties go to the smaller absolute delay, then to the positive one.
Eigen::Index histogram_peak(const Eigen::Ref<const Eigen::ArrayXd>& h,
                            double* peak = nullptr);

// Convenience entry running level alignment and filtering first.
AlignmentResult align(const AudioSignal& ref, const AudioSignal& deg,
                      const PesqConfig& cfg);

}  // namespace pesq

#endif  // PESQ_ALIGNMENT_HPP_
