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

#include "pesq/perceptual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace pesq {

namespace {

using Eigen::Index;

constexpr double kSilence5Samples = 500.0;
constexpr double kSilentFramePower = 1e7;
constexpr double kBadFrameThreshold = 30.0;
constexpr Index kSmearRange = 2;
constexpr Index kMinBadFrames = 5;
constexpr Index kSearchRangeFrames = 4;
constexpr Index kSyllableFrames = 20;
constexpr double kMaxGain = 5.0;
constexpr double kMinGain = 3e-4;
constexpr double kZwickerPower = 0.23;
constexpr double kMaxFrameDisturbance = 45.0;

// Delay of the utterance containing `sample`, the first one before any.
Index delay_at(const AlignmentResult& a, Index sample, Index ds) {
  const auto& u = a.utterances;
  for (Index i = static_cast<Index>(u.size()) - 1; i >= 0; --i) {
    if (u[i].start * ds <= sample) return u[i].delay;
  }
  return u.front().delay;
}

double pseudo_lp(const BarkSpectrum& x, double power, const RateParams& p) {
  double total = 0.0, weight = 0.0;
  for (Index b = 1; b < p.num_bands; ++b) {
    const double w = p.band_width_bark[b];
    total += std::pow(std::abs(x(b)) * w, power);
    weight += w;
  }
  return std::pow(total / weight, 1.0 / power) * weight;
}

FrameDisturbance disturbance_of(const BarkSpectrum& ref_bark,
                                const BarkSpectrum& deg_bark,
                                const RateParams& p) {
  return frame_disturbance(loudness_density(ref_bark, p),
                           loudness_density(deg_bark, p), ref_bark, deg_bark, p);
}

// Normalized circular cross-correlation peak of |x1| and |x2| within
// +-range samples; zero lag and zero correlation for near-silent inputs.
Index correlation_delay(const Eigen::ArrayXd& x1, const Eigen::ArrayXd& x2,
                        Index range, double* correlation, RealFft& fft) {
  const Index n = x1.size();
  const Index m = next_pow2(2 * n);
  const double p1 = x1.square().sum() / m;
  const double p2 = x2.square().sum() / m;
  *correlation = 0.0;
  if (p1 <= 1e-6 || p2 <= 1e-6) return 0;
  const double norm = std::sqrt(p1 * p2);

  const Eigen::ArrayXcd cross =
      fft.forward(x1.abs(), m).conjugate() * fft.forward(x2.abs(), m) / static_cast<double>(m);
  const Eigen::ArrayXd y = fft.inverse(cross, m);

  Index best = 0;
  for (Index lag = -range; lag < range; ++lag) {
    const double h = std::abs(y(lag < 0 ? lag + m : lag)) / norm;
    if (h > *correlation) {
      *correlation = h;
      best = lag;
    }
  }
  return best;
}

double lpq_weight(const Eigen::ArrayXd& dist, const Eigen::ArrayXd& time_weight,
                  Index start_frame, Index stop_frame, double p_syllable,
                  double p_time) {
  double total = 0.0, total_weight = 0.0;
  for (Index s = start_frame; s <= stop_frame; s += kSyllableFrames / 2) {
    const Index last = std::min(s + kSyllableFrames - 1, stop_frame);
    double syllable = dist.segment(s, last - s + 1).pow(p_syllable).sum();
    syllable = std::pow(syllable / kSyllableFrames, 1.0 / p_syllable);
    const double w = time_weight(s - start_frame);
    total += std::pow(w * syllable, p_time);
    total_weight += std::pow(w, p_time);
  }
  return std::pow(total / total_weight, 1.0 / p_time);
}

}  // namespace

BarkSpectrum bark_spectrum(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                           const Eigen::ArrayXd& window, const RateParams& p,
                           RealFft& fft) {
  const Index n = p.frame_len;
  const Eigen::ArrayXd power = fft.forward(frame * window, n).abs2();
  BarkSpectrum bark(p.num_bands);
  Index bin = 0;
  for (Index b = 0; b < p.num_bands; ++b) {
    const Index width = p.bins_per_band[b];
    double sum = 0.0;
    for (Index k = bin; k < bin + width; ++k) {
      if (k > 0) sum += power(k);
    }
    bin += width;
    bark(b) = sum * p.power_density_correction[b] * p.power_scale;
  }
  return bark;
}

PerceptualFrames perceptual_transform(const PaddedSignal& ref,
                                      const PaddedSignal& deg,
                                      const AlignmentResult& alignment,
                                      const RateParams& p, RealFft& fft) {
  const Index g = p.guard();
  const Index nf = p.frame_len;
  const Index hop = nf / 2;
  const Index max_length = std::max(ref.length, deg.length);
  const Index span = max_length - 2 * g + p.tail();

  Index skip_start = 0;
  double sum5;
  do {
    sum5 = ref.data.segment(g + skip_start, 5).abs().sum();
    if (sum5 < kSilence5Samples) ++skip_start;
  } while (sum5 < kSilence5Samples && skip_start < max_length / 2);

  Index skip_end = 0;
  do {
    sum5 = ref.data.segment(max_length - g + p.tail() - 5 - skip_end, 5).abs().sum();
    if (sum5 < kSilence5Samples) ++skip_end;
  } while (sum5 < kSilence5Samples && skip_end < max_length / 2);

  PerceptualFrames out;
  out.start_frame = skip_start / hop;
  out.stop_frame = (span - skip_end) / hop - 1;
  out.span_frames = span / hop - 1;
  out.max_length = max_length;

  const Index frames = out.stop_frame + 1;
  out.ref.setZero(frames, p.num_bands);
  out.deg.setZero(frames, p.num_bands);
  out.silent.resize(frames);

  const Eigen::ArrayXd window = hann_window(nf);
  for (Index f = 0; f < frames; ++f) {
    const Index start_ref = g + f * hop;
    out.ref.row(f) = bark_spectrum(ref.data.segment(start_ref, nf), window, p, fft).transpose();
    const Index start_deg = start_ref + delay_at(alignment, start_ref, p.downsample);
    if (start_deg > 0 && start_deg + nf < max_length + p.tail()) {
      out.deg.row(f) = bark_spectrum(deg.data.segment(start_deg, nf), window, p, fft).transpose();
    }
    out.silent(f) = audible_power(out.ref.row(f).transpose(), 1e2, p) < kSilentFramePower;
  }
  return out;
}

double audible_power(const Eigen::Ref<const BarkSpectrum>& bark, double factor,
                     const RateParams& p) {
  double total = 0.0;
  for (Index b = 1; b < p.num_bands; ++b) {
    if (bark(b) > factor * p.absolute_threshold[b]) total += bark(b);
  }
  return total;
}

Eigen::ArrayXd frame_gains(const BarkSeries& ref, const BarkSeries& deg,
                           Index first, Index last, const RateParams& p) {
  Eigen::ArrayXd gains(last - first);
  double previous = 1.0;
  for (Index f = first; f < last; ++f) {
    const double r = audible_power(ref.row(f).transpose(), 1.0, p);
    const double d = audible_power(deg.row(f).transpose(), 1.0, p);
    double scale = (r + 5e3) / (d + 5e3);
    if (f > 0) scale = 0.2 * previous + 0.8 * scale;
    previous = scale;
    gains(f - first) = std::clamp(scale, kMinGain, kMaxGain);
  }
  return gains;
}

Compensation compensate(BarkSeries& ref, BarkSeries& deg, const FrameMask& silent,
                        Index span_frames, const RateParams& p) {
  const Index frames = ref.rows();
  const Eigen::Map<const Eigen::ArrayXd> thresh(p.absolute_threshold.data(), p.num_bands);
  auto band_average = [&](const BarkSeries& s) {
    BarkSpectrum avg = BarkSpectrum::Zero(p.num_bands);
    for (Index f = 0; f < frames; ++f) {
      if (silent(f)) continue;
      const BarkSpectrum row = s.row(f).transpose();
      avg += (row > 100.0 * thresh).select(row, 0.0);
    }
    return BarkSpectrum(avg / static_cast<double>(span_frames));
  };

  Compensation c;
  c.band_ratio = ((band_average(deg) + 1000.0) / (band_average(ref) + 1000.0))
                     .min(100.0)
                     .max(0.01);
  ref.rowwise() *= c.band_ratio.transpose();

  c.ref_audible_power.resize(frames);
  for (Index f = 0; f < frames; ++f) {
    c.ref_audible_power(f) = audible_power(ref.row(f).transpose(), 1.0, p);
  }
  c.frame_gain = frame_gains(ref, deg, 0, frames, p);
  deg.colwise() *= c.frame_gain;
  return c;
}

BarkSpectrum loudness_density(const Eigen::Ref<const BarkSpectrum>& bark,
                              const RateParams& p) {
  BarkSpectrum out(bark.size());
  for (Index b = 0; b < bark.size(); ++b) {
    const double centre = p.band_centre_bark[b];
    const double thr = p.absolute_threshold[b];
    double h = centre < 4.0 ? 6.0 / (centre + 2.0) : 1.0;
    h = std::pow(std::min(h, 2.0), 0.15);
    const double power = kZwickerPower * h;
    out(b) = bark(b) > thr
                 ? p.loudness_scale * std::pow(thr / 0.5, power) *
                       (std::pow(0.5 + 0.5 * bark(b) / thr, power) - 1.0)
                 : 0.0;
  }
  return out;
}

FrameDisturbance frame_disturbance(const Eigen::Ref<const BarkSpectrum>& ref_loud,
                                   const Eigen::Ref<const BarkSpectrum>& deg_loud,
                                   const Eigen::Ref<const BarkSpectrum>& ref_bark,
                                   const Eigen::Ref<const BarkSpectrum>& deg_bark,
                                   const RateParams& p) {
  const BarkSpectrum diff = deg_loud - ref_loud;
  const BarkSpectrum dead = 0.25 * deg_loud.min(ref_loud);
  BarkSpectrum d = (diff > dead).select(diff - dead, (diff < -dead).select(diff + dead, 0.0));

  FrameDisturbance out;
  out.d_sym = pseudo_lp(d, 2.0, p);

  const BarkSpectrum h = ((deg_bark + 50.0) / (ref_bark + 50.0)).pow(1.2).min(12.0);
  d *= (h < 3.0).select(0.0, h);
  out.d_asym = pseudo_lp(d, 1.0, p);
  return out;
}

DisturbanceSeries disturbance_series(const PerceptualFrames& frames,
                                     const Compensation& comp,
                                     const RateParams& p) {
  const Index n = frames.ref.rows();
  DisturbanceSeries s;
  s.d_sym.resize(n);
  s.d_asym.resize(n);
  s.ref_audible_power = comp.ref_audible_power;
  s.audible = !frames.silent;
  s.start_frame = frames.start_frame;
  s.weighting_frames = (frames.max_length - 2 * p.guard()) / (p.frame_len / 2) - 1;
  for (Index f = 0; f < n; ++f) {
    const FrameDisturbance d = disturbance_of(frames.ref.row(f).transpose(),
                                              frames.deg.row(f).transpose(), p);
    s.d_sym(f) = d.d_sym;
    s.d_asym(f) = d.d_asym;
  }
  return s;
}

void skip_delay_jumps(DisturbanceSeries& series, const AlignmentResult& alignment,
                      const RateParams& p) {
  const auto& u = alignment.utterances;
  const Index ds = p.downsample;
  const Index hop = p.frame_len / 2;
  const Index stop_frame = series.size() - 1;
  for (std::size_t i = 1; i < u.size(); ++i) {
    Index first = ((u[i].start - 75) * ds + u[i].delay) / hop;
    const Index prev_end = ((u[i - 1].end - 75) * ds + u[i - 1].delay) / hop;
    const Index jump = u[i].delay - u[i - 1].delay;
    first = std::max<Index>(std::min(first, prev_end), 0);
    if (jump < -hop) {
      const Index last = ((u[i].start - 75) * ds + std::abs(jump)) / hop + 1;
      for (Index f = first; f <= last && f < stop_frame; ++f) {
        series.d_sym(f) = 0.0;
        series.d_asym(f) = 0.0;
      }
    }
  }
}

void realign_bad_intervals(DisturbanceSeries& series, const BarkSeries& ref_bark,
                           const PaddedSignal& ref, const PaddedSignal& deg,
                           const AlignmentResult& alignment, Index max_length,
                           const RateParams& p, RealFft& fft) {
  const Index stop_frame = series.size() - 1;
  const Index g = p.guard();
  const Index nf = p.frame_len;
  const Index hop = nf / 2;

  FrameMask bad = series.d_sym > kBadFrameThreshold;
  bad(0) = false;
  FrameMask smeared = FrameMask::Constant(series.size(), false);
  for (Index f = kSmearRange; f < stop_frame - kSmearRange; ++f) {
    smeared(f) = bad.segment(f - kSmearRange, kSmearRange + 1).any() &&
                 bad.segment(f, kSmearRange + 1).any();
  }

  struct Interval {
    Index first, last;
  };
  std::vector<Interval> intervals;
  for (Index f = 0; f <= stop_frame;) {
    while (f <= stop_frame && !smeared(f)) ++f;
    if (f > stop_frame) break;
    const Index first = f;
    while (f <= stop_frame && smeared(f)) ++f;
    if (f <= stop_frame && f - first >= kMinBadFrames) intervals.push_back({first, f});
  }
  if (intervals.empty()) return;

  const Index total = max_length + p.tail();
  Eigen::ArrayXd tweaked = Eigen::ArrayXd::Zero(total);
  for (Index i = g; i < total - g; ++i) {
    const Index j = std::clamp<Index>(i + delay_at(alignment, i, p.downsample), g,
                                      total - g - 1);
    tweaked(i) = deg.data(j);
  }

  const Index range = kSearchRangeFrames * nf;
  Eigen::ArrayXd doubly = tweaked;
  for (const Interval& iv : intervals) {
    const Index start = iv.first * hop + g;
    const Index stop = iv.last * hop + nf + g;
    const Index len = stop - start;
    Eigen::ArrayXd r = Eigen::ArrayXd::Zero(2 * range + len);
    r.segment(range, len) = ref.data.segment(start, len);
    Eigen::ArrayXd d(2 * range + len);
    for (Index i = 0; i < d.size(); ++i) {
      d(i) = tweaked(std::clamp<Index>(start - range + i, g, max_length - g + p.tail() - 1));
    }
    double correlation = 0.0;
    Index delay = correlation_delay(r, d, range, &correlation, fft);
    if (correlation < 0.5) delay = 0;
    for (Index i = start; i < stop; ++i) {
      doubly(i) = tweaked(std::clamp<Index>(i + delay, 0, max_length - 1));
    }
  }

  const Eigen::ArrayXd window = hann_window(nf);
  BarkSeries deg_bark(ref_bark.rows(), ref_bark.cols());
  for (const Interval& iv : intervals) {
    for (Index f = iv.first; f < iv.last; ++f) {
      deg_bark.row(f) =
          bark_spectrum(doubly.segment(g + f * hop, nf), window, p, fft).transpose();
    }
    const Eigen::ArrayXd gains = frame_gains(ref_bark, deg_bark, iv.first, iv.last, p);
    for (Index f = iv.first; f < iv.last; ++f) {
      const BarkSpectrum scaled = deg_bark.row(f).transpose() * gains(f - iv.first);
      const FrameDisturbance d = disturbance_of(ref_bark.row(f).transpose(), scaled, p);
      series.d_sym(f) = std::min(series.d_sym(f), d.d_sym);
      series.d_asym(f) = std::min(series.d_asym(f), d.d_asym);
    }
  }
}

std::pair<double, double> aggregate(const DisturbanceSeries& series) {
  const Index frames = series.size();
  const Index stop_frame = frames - 1;

  Eigen::ArrayXd time_weight = Eigen::ArrayXd::Ones(frames);
  if (frames > 1000) {
    const double n = static_cast<double>(series.weighting_frames);
    const double factor = std::min((n - 1000.0) / 5500.0, 0.5);
    for (Index f = 0; f < frames; ++f) time_weight(f) = 1.0 - factor + factor * f / n;
  }

  const Eigen::ArrayXd h = ((series.ref_audible_power + 1e5) / 1e7).pow(0.04);
  const Eigen::ArrayXd d = (series.d_sym / h).min(kMaxFrameDisturbance);
  const Eigen::ArrayXd a = (series.d_asym / h).min(kMaxFrameDisturbance);

  return {lpq_weight(d, time_weight, series.start_frame, stop_frame, 6.0, 2.0),
          lpq_weight(a, time_weight, series.start_frame, stop_frame, 6.0, 2.0)};
}

double raw_score_unclamped(double d_sym_total, double d_asym_total) {
  return 4.5 - 0.1 * d_sym_total - 0.0309 * d_asym_total;
}

double raw_score(double d_sym_total, double d_asym_total) {
  return std::clamp(raw_score_unclamped(d_sym_total, d_asym_total), -0.5, 4.5);
}

}  // namespace pesq
