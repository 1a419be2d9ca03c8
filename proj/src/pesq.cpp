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

#include "pesq/pesq.hpp"

#include <algorithm>
#include <string>

#include "pesq/error.hpp"
#include "pesq/front_end.hpp"
#include "pesq/mos_mapping.hpp"
#include "pesq/perceptual.hpp"
#include "pesq/signal_io.hpp"

namespace pesq {

namespace {

void check_input(const AudioSignal& s, const char* name, const PesqConfig& cfg) {
  if (s.channels() != 1) {
    throw Error(ErrorCode::kUnsupportedChannels,
                std::string(name) + " must be mono; pick a stereo strategy");
  }
  validate_for_scoring(s);
  if (s.rate() != cfg.rate) {
    throw Error(ErrorCode::kRateMismatch,
                std::string(name) + " rate " + std::to_string(s.rate()) +
                    " Hz differs from the configured " + std::to_string(cfg.rate) + " Hz");
  }
}

}  // namespace

PesqResult compute_pesq(const AudioSignal& ref, const AudioSignal& deg,
                        const PesqConfig& cfg) {
  validate(cfg);
  check_input(ref, "reference", cfg);
  check_input(deg, "degraded", cfg);
  const RateParams& p = rate_params(cfg.rate);
  RealFft fft;

  PaddedSignal r = pad(ref.channel(0), p);
  PaddedSignal d = pad(deg.channel(0), p);
  const Eigen::Index max_length = std::max(r.length, d.length);
  r.data *= level_gain(r, max_length, p, fft);
  d.data *= level_gain(d, max_length, p, fft);
  input_filter(r, cfg, fft);
  input_filter(d, cfg, fft);

  const AlignmentTrack rt = make_alignment_track(r, p);
  const AlignmentTrack dt = make_alignment_track(d, p);
  const Eigen::Index crude = estimate_crude_delay(rt, dt, p, fft);
  const std::vector<UtteranceSpan> spans = detect_utterances(rt, d.length, crude, p);
  if (spans.empty()) {
    throw Error(ErrorCode::kNoUtterances, "no speech activity found in the reference");
  }

  PesqResult out;
  out.alignment = align_utterances(rt, dt, crude, spans, p, fft);

  extend_to(r, max_length, p);
  extend_to(d, max_length, p);
  PerceptualFrames frames = perceptual_transform(r, d, out.alignment, p, fft);
  const Compensation comp =
      compensate(frames.ref, frames.deg, frames.silent, frames.span_frames, p);
  DisturbanceSeries series = disturbance_series(frames, comp, p);
  skip_delay_jumps(series, out.alignment, p);
  realign_bad_intervals(series, frames.ref, r, d, out.alignment, max_length, p, fft);
  std::tie(out.d_sym, out.d_asym) = aggregate(series);

  out.internal = raw_score_unclamped(out.d_sym, out.d_asym);
  if (cfg.band == Band::kNarrow) {
    out.raw = raw_score(out.d_sym, out.d_asym);
    if (cfg.output == Output::kMosLqo) out.mos_lqo = map_nb_lqo(out.internal);
  } else {
    out.mos_lqo = map_wb_lqo(out.internal);
  }
  return out;
}

double headline_score(const PesqResult& result, const PesqConfig& cfg) {
  return cfg.output == Output::kRaw ? *result.raw : *result.mos_lqo;
}

double score_samples(std::span<const double> ref, std::span<const double> deg,
                     int rate, Mode mode) {
  const PesqConfig cfg = config_for(mode, rate);
  auto wrap = [rate](std::span<const double> s) {
    return AudioSignal::mono(
        Eigen::Map<const Eigen::ArrayXd>(s.data(), static_cast<Eigen::Index>(s.size())),
        rate);
  };
  return headline_score(compute_pesq(wrap(ref), wrap(deg), cfg), cfg);
}

std::string_view version() { return "pesqkit 0.1.0"; }

}  // namespace pesq
