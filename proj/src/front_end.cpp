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

#include "pesq/front_end.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pesq/error.hpp"
#include "pesq/tables.hpp"

namespace pesq {

PaddedSignal pad(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                 const RateParams& p) {
  PaddedSignal s;
  s.length = samples.size() + 2 * p.guard();
  s.data.setZero(s.length + p.tail());
  s.data.segment(p.guard(), samples.size()) = samples;
  return s;
}

void extend_to(PaddedSignal& s, Eigen::Index length, const RateParams& p) {
  const Eigen::Index old = s.data.size();
  const Eigen::Index target = length + p.tail();
  if (target <= old) return;
  s.data.conservativeResize(target);
  s.data.tail(target - old).setZero();
}

double level_gain(const PaddedSignal& s, Eigen::Index max_length,
                  const RateParams& p, RealFft& fft) {
  const Eigen::Index span = s.length - 2 * p.guard() + p.tail();
  Eigen::ArrayXd band = s.data.segment(p.guard(), span);
  curve_filter(band, p.rate, tables::kLevelCurve, fft);
  const double power =
      band.square().sum() / static_cast<double>(max_length - 2 * p.guard() + p.tail());
  if (!(power > 0.0)) {
    throw Error(ErrorCode::kSilentInput,
                "silent input: no signal power in the 350-3250 Hz band");
  }
  return std::sqrt(kTargetLevel / power);
}

LevelAlignment fix_levels(const AudioSignal& ref, const AudioSignal& deg,
                          const PesqConfig& cfg) {
  validate(cfg);
  const RateParams& p = rate_params(cfg.rate);
  if (ref.channels() != 1 || deg.channels() != 1) {
    throw Error(ErrorCode::kUnsupportedChannels, "level alignment needs mono input");
  }
  if (ref.rate() != cfg.rate || deg.rate() != cfg.rate) {
    throw Error(ErrorCode::kRateMismatch, "signal rate differs from configuration");
  }
  const PaddedSignal r = pad(ref.channel(0), p);
  const PaddedSignal d = pad(deg.channel(0), p);
  const Eigen::Index max_length = std::max(r.length, d.length);
  RealFft fft;
  const double gr = level_gain(r, max_length, p, fft);
  const double gd = level_gain(d, max_length, p, fft);
  return {AudioSignal(ref.samples() * gr, cfg.rate),
          AudioSignal(deg.samples() * gd, cfg.rate), gr, gd};
}

std::array<double, 5> wideband_section(bool corrigendum2) {
  std::array<double, 5> sos = tables::kWidebandIir;
  if (corrigendum2) {
    for (int i = 0; i < 3; ++i) sos[i] *= tables::kWidebandCorrectionGain;
  }
  return sos;
}

void input_filter(PaddedSignal& s, const PesqConfig& cfg, RealFft& fft) {
  const RateParams& p = rate_params(cfg.rate);
  const Eigen::Index g = p.guard();
  if (cfg.band == Band::kNarrow) {
    curve_filter(s.data.segment(g, s.length - 2 * g + p.tail()), p.rate,
                 tables::kHandsetCurve, fft);
    return;
  }
  for (int i = 0; i < 16; ++i) {
    s.data(g + i - 1) *= i / 16.0;
    s.data(s.length - g - i) *= i / 16.0;
  }
  sos_filter(s.data.segment(g, s.length - 2 * g), wideband_section(cfg.corrigendum2));
}

AudioSignal input_filter(const AudioSignal& s, const PesqConfig& cfg) {
  validate(cfg);
  const RateParams& p = rate_params(cfg.rate);
  PaddedSignal padded = pad(s.channel(0), p);
  RealFft fft;
  input_filter(padded, cfg, fft);
  return AudioSignal::mono(padded.data.segment(p.guard(), s.frames()), s.rate());
}

}  // namespace pesq
