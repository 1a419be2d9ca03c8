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

#ifndef PESQ_PERCEPTUAL_HPP_
#define PESQ_PERCEPTUAL_HPP_

#include <Eigen/Core>
#include <utility>

#include "pesq/alignment.hpp"
#include "pesq/config.hpp"
#include "pesq/dsp.hpp"
#include "pesq/padded_signal.hpp"

namespace pesq {

// One row per frame, one column per Bark band.
using BarkSeries =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BarkSpectrum = Eigen::ArrayXd;
using FrameMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

struct PerceptualFrames {
  BarkSeries ref;
  BarkSeries deg;
  FrameMask silent;
  // First frame past the leading silence and last frame before the
  // trailing one.
  Eigen::Index start_frame = 0;
  Eigen::Index stop_frame = 0;
  // Frame count of the common padded span; divisor of the band averages.
  Eigen::Index span_frames = 0;
  Eigen::Index max_length = 0;
};

// Hann-windowed power spectrum of frame_len samples grouped into bands.
BarkSpectrum bark_spectrum(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                           const Eigen::ArrayXd& window, const RateParams& p,
                           RealFft& fft);

// Both inputs must already be extended to the common length.
PerceptualFrames perceptual_transform(const PaddedSignal& ref,
                                      const PaddedSignal& deg,
                                      const AlignmentResult& alignment,
                                      const RateParams& p, RealFft& fft);

// Sum of the bands 1.. above factor times the hearing threshold.
double audible_power(const Eigen::Ref<const BarkSpectrum>& bark, double factor,
                     const RateParams& p);

struct Compensation {
  BarkSpectrum band_ratio;
  Eigen::ArrayXd frame_gain;
  Eigen::ArrayXd ref_audible_power;
};

// Scales the reference bands by the long-term deg/ref ratio and each degraded
// frame by a smoothed short-term gain, in place.
Compensation compensate(BarkSeries& ref, BarkSeries& deg,
                        const FrameMask& silent, Eigen::Index span_frames,
                        const RateParams& p);

// Short-term gains for frames [first, last) restarting the smoothing at
// `first`.
Eigen::ArrayXd frame_gains(const BarkSeries& ref, const BarkSeries& deg,
                           Eigen::Index first, Eigen::Index last,
                           const RateParams& p);

BarkSpectrum loudness_density(const Eigen::Ref<const BarkSpectrum>& bark,
                              const RateParams& p);

struct FrameDisturbance {
  double d_sym = 0.0;
  double d_asym = 0.0;
};

FrameDisturbance frame_disturbance(const Eigen::Ref<const BarkSpectrum>& ref_loud,
                                   const Eigen::Ref<const BarkSpectrum>& deg_loud,
                                   const Eigen::Ref<const BarkSpectrum>& ref_bark,
                                   const Eigen::Ref<const BarkSpectrum>& deg_bark,
                                   const RateParams& p);

struct DisturbanceSeries {
  Eigen::ArrayXd d_sym;
  Eigen::ArrayXd d_asym;
  Eigen::ArrayXd ref_audible_power;
  FrameMask audible;
  Eigen::Index start_frame = 0;
  // Frame count of the padded span without the tail, used by the time
  // weighting of long signals.
  Eigen::Index weighting_frames = 0;

  Eigen::Index size() const { return d_sym.size(); }
};

DisturbanceSeries disturbance_series(const PerceptualFrames& frames,
                                     const Compensation& comp,
                                     const RateParams& p);

// Zeroes frames spanning a backward delay jump between utterances.
void skip_delay_jumps(DisturbanceSeries& series,
                      const AlignmentResult& alignment, const RateParams& p);

// Re-estimates the delay over runs of heavily disturbed frames and keeps the
// smaller disturbance where realignment helps.
void realign_bad_intervals(DisturbanceSeries& series, const BarkSeries& ref_bark,
                           const PaddedSignal& ref, const PaddedSignal& deg,
                           const AlignmentResult& alignment,
                           Eigen::Index max_length, const RateParams& p,
                           RealFft& fft);

// (symmetric, asymmetric) totals.
std::pair<double, double> aggregate(const DisturbanceSeries& series);

double raw_score_unclamped(double d_sym_total, double d_asym_total);
double raw_score(double d_sym_total, double d_asym_total);

}  // namespace pesq

#endif  // PESQ_PERCEPTUAL_HPP_
