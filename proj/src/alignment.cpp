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

#include "pesq/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "pesq/front_end.hpp"

namespace pesq {

namespace {

using Eigen::Index;

constexpr Index kMinSpeechLength = 4;
constexpr Index kJoinSpeechLength = 50;
constexpr Index kMinUtteranceLength = 50;
constexpr Index kSearchBuffer = 75;
constexpr Index kMaxUtterances = 50;
constexpr Index kMaxBreakpoints = 40;

void dc_block(Eigen::ArrayXd& x, Index length, const RateParams& p) {
  const Index g = p.guard();
  const Index ds = p.downsample;
  auto inner = x.segment(g, length - 2 * g);
  inner -= inner.sum() / static_cast<double>(length);
  for (Index k = 0; k < ds; ++k) {
    const double w = (0.5 + k) / ds;
    x(g + k) *= w;
    x(length - g - 1 - k) *= w;
  }
}

void speech_activity(AlignmentTrack& t, const RateParams& p) {
  const Index ds = p.downsample;
  const Index n = t.length / ds;
  Eigen::ArrayXd& vad = t.vad;
  vad = t.data.head(n * ds).reshaped(ds, n).square().colwise().mean().transpose();

  double thresh = vad.mean();
  double level_min = vad.maxCoeff();
  level_min = level_min > 0.0 ? level_min * 1e-4 : 1.0;
  vad = vad.max(level_min);

  double noise = 0.0;
  for (int it = 0; it < 12; ++it) {
    noise = 0.0;
    double sd = 0.0;
    Index count = 0;
    for (Index i = 0; i < n; ++i) {
      if (vad(i) <= thresh) {
        noise += vad(i);
        ++count;
      }
    }
    if (count > 0) {
      noise /= count;
      for (Index i = 0; i < n; ++i) {
        if (vad(i) <= thresh) sd += (vad(i) - noise) * (vad(i) - noise);
      }
      sd = std::sqrt(sd / count);
    }
    thresh = 1.001 * (noise + 2.0 * sd);
  }

  double level_sig = 0.0;
  noise = 0.0;
  Index active = 0;
  for (Index i = 0; i < n; ++i) {
    if (vad(i) > thresh) {
      level_sig += vad(i);
      ++active;
    } else {
      noise += vad(i);
    }
  }
  if (active > 0) {
    level_sig /= active;
  } else {
    thresh = -1.0;
  }
  noise = active < n ? noise / (n - active) : 1.0;

  for (Index i = 0; i < n; ++i) {
    if (vad(i) <= thresh) vad(i) = -vad(i);
  }
  vad(0) = -level_min;
  vad(n - 1) = -level_min;

  Index start = 0, finish = 0;
  for (Index i = 1; i < n; ++i) {
    if (vad(i) > 0.0 && vad(i - 1) <= 0.0) start = i;
    if (vad(i) <= 0.0 && vad(i - 1) > 0.0) {
      finish = i;
      if (finish - start <= kMinSpeechLength) {
        vad.segment(start, finish - start) *= -1.0;
      }
    }
  }

  if (level_sig >= noise * 1000.0) {
    for (Index i = 1; i < n; ++i) {
      if (vad(i) > 0.0 && vad(i - 1) <= 0.0) start = i;
      if (vad(i) <= 0.0 && vad(i - 1) > 0.0) {
        finish = i;
        const double energy = vad.segment(start, finish - start).sum();
        if (energy < 3.0 * thresh * (finish - start)) {
          vad.segment(start, finish - start) *= -1.0;
        }
      }
    }
  }

  start = 0;
  finish = 0;
  for (Index i = 1; i < n; ++i) {
    if (vad(i) > 0.0 && vad(i - 1) <= 0.0) {
      start = i;
      if (finish > 0 && start - finish <= kJoinSpeechLength) {
        vad.segment(finish, start - finish).setConstant(level_min);
      }
    }
    if (vad(i) <= 0.0 && vad(i - 1) > 0.0) finish = i;
  }

  start = 0;
  for (Index i = 1; i < n; ++i) {
    if (vad(i) > 0.0 && vad(i - 1) <= 0.0) start = i;
  }
  if (start == 0) {
    vad = vad.abs();
    vad(0) = -level_min;
    vad(n - 1) = -level_min;
  }

  Index i = 3;
  while (i < n - 2) {
    if (vad(i) > 0.0 && vad(i - 2) <= 0.0) {
      vad(i - 2) = vad(i) * 0.1;
      vad(i - 1) = vad(i) * 0.3;
      ++i;
    }
    if (vad(i) <= 0.0 && vad(i - 1) > 0.0) {
      vad(i) = vad(i - 1) * 0.3;
      vad(i + 1) = vad(i - 1) * 0.1;
      i += 3;
    }
    ++i;
  }

  vad = vad.max(0.0);
  if (thresh <= 0.0) thresh = level_min;
  t.log_vad = (vad > thresh).select((vad / thresh).log(), 0.0);
}

// Lag of the envelope cross-correlation peak, in windows. The raw
// correlation is handed back through `correlation` when requested.
Index envelope_lag(const Eigen::ArrayXd& ref_env, Index startr, Index nr,
                   const Eigen::ArrayXd& deg_env, Index startd, Index nd,
                   RealFft& fft, Eigen::ArrayXd* correlation = nullptr) {
  if (nr <= 1 || nd <= 1) return 0;
  Eigen::ArrayXd y = cross_correlate(ref_env.segment(startr, nr),
                                     deg_env.segment(startd, nd), fft);
  double best = 0.0;
  Index best_i = nr - 1;
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) > best) {
      best = y(i);
      best_i = i;
    }
  }
  if (correlation) *correlation = std::move(y);
  return best_i - nr + 1;
}

// Envelope delay of a reference stretch [search_start, search_end) given a
// prior estimate, in samples.
Index refine_envelope_delay(const AlignmentTrack& ref,
                            const AlignmentTrack& deg, Index search_start,
                            Index search_end, Index estimate,
                            const RateParams& p, RealFft& fft,
                            Eigen::ArrayXd* correlation = nullptr) {
  const Index ds = p.downsample;
  Index startr = search_start;
  Index startd = startr + estimate / ds;
  if (startd < 0) {
    startr = -estimate / ds;
    startd = 0;
  }
  const Index nr = search_end - startr;
  Index nd = nr;
  if (startd + nd > deg.length / ds) nd = deg.length / ds - startd;
  if (correlation) correlation->resize(0);
  return envelope_lag(ref.log_vad, startr, nr, deg.log_vad, startd, nd, fft,
                      correlation) *
             ds +
         estimate;
}

class DelayHistogram {
 public:
  DelayHistogram(const RateParams& p, Eigen::ArrayXd window)
      : n_(p.align_nfft), window_(std::move(window)) {
    reset();
  }

  void reset() {
    h_.setZero(n_);
    sum_ = 0.0;
  }

  // Peak picks of the windowed cross-correlation at one position.
  template <typename OnPick>
  void analyse(const AlignmentTrack& ref, const AlignmentTrack& deg,
               Index startr, Index startd, RealFft& fft, OnPick&& on_pick) {
    const Eigen::ArrayXd a = ref.data.segment(startr, n_) * window_;
    const Eigen::ArrayXd b = deg.data.segment(startd, n_) * window_;
    const Eigen::ArrayXcd cross = fft.forward(a, n_).conjugate() * fft.forward(b, n_);
    const Eigen::ArrayXd x = fft.inverse(cross, n_).abs();
    const double v_max = x.maxCoeff() * 0.99;
    for (Index i = 0; i < n_; ++i) {
      if (x(i) > v_max) on_pick(i, v_max);
    }
  }

  void add_point(Index i, double weight) { h_(i) += weight; }

  void add_spread(Index i, double v_max, Index kernel) {
    const double n_max = std::pow(v_max, 0.125) / kernel;
    sum_ += n_max * kernel;
    for (Index k = 1 - kernel; k < kernel; ++k) {
      h_((i + k + n_) % n_) += n_max * (kernel - std::abs(k));
    }
  }

  Eigen::ArrayXd& values() { return h_; }
  double sum() const { return sum_; }
  Index size() const { return n_; }

 private:
  Index n_;
  Eigen::ArrayXd window_;
  Eigen::ArrayXd h_;
  double sum_ = 0.0;
};

void time_align(const AlignmentTrack& ref, const AlignmentTrack& deg,
                Index search_start, Index search_end, Utterance& u,
                const RateParams& p, RealFft& fft) {
  const Index n = p.align_nfft;
  DelayHistogram hist(p, hann_window(n));
  const Index estimate = u.delay_estimate;
  Index startr = search_start * p.downsample;
  Index startd = startr + estimate;
  if (startd < 0) {
    startr = -estimate;
    startd = 0;
  }
  while (startd + n <= deg.length && startr + n <= search_end * p.downsample) {
    hist.analyse(ref, deg, startr, startd, fft, [&](Index i, double v_max) {
      hist.add_point(i, std::pow(v_max, 0.125));
    });
    startr += n / 4;
    startd += n / 4;
  }

  const Eigen::ArrayXd& h = hist.values();
  const double total = h.sum();
  const Index kernel = n / 64;
  Eigen::ArrayXd smooth = Eigen::ArrayXd::Zero(n);
  if (total > 0.0) {
    for (Index i = 0; i < n; ++i) {
      double acc = h((i + n) % n);
      for (Index k = 1; k < kernel; ++k) {
        const double w = 1.0 - static_cast<double>(k) / kernel;
        acc += w * (h((i - k + n) % n) + h((i + k) % n));
      }
      smooth(i) = acc / total;
    }
  }
  double peak = 0.0;
  u.delay = estimate + histogram_peak(smooth, &peak);
  u.confidence = peak;
}

struct SplitChoice {
  Index ed1, d1, ed2, d2, breakpoint;
  double dc1, dc2;
};

std::optional<SplitChoice> split_align(const AlignmentTrack& ref,
                                       const AlignmentTrack& deg,
                                       Index utt_start, Index speech_start,
                                       Index speech_end, Index utt_end,
                                       Index estimate, double confidence,
                                       const RateParams& p, RealFft& fft) {
  const Index n = p.align_nfft;
  const Index ds = p.downsample;
  const Index kernel = n / 64;
  const Index utt_len = speech_end - speech_start;

  const Index delta = n / (4 * ds);
  Index step = static_cast<Index>((0.801 * utt_len + 40 * delta - 1) / (40 * delta));
  step *= delta;
  const Index pad = std::max<Index>(utt_len / 10, 75);

  std::vector<Index> bps{speech_start + pad};
  do {
    bps.push_back(bps.back() + step);
  } while (bps.back() <= speech_end - pad &&
           static_cast<Index>(bps.size()) - 1 < kMaxBreakpoints);
  const Index count = static_cast<Index>(bps.size()) - 1;

  // The correlation output of the envelope searches shares memory with the
  // analysis window, so a long utterance leaves correlation values in it.
  constexpr Index kWindowOffsetBase = 6;
  const Index window_offset = kWindowOffsetBase + 3 * n;
  Eigen::ArrayXd window = hann_window(n);
  auto overlay = [&](const Eigen::ArrayXd& y) {
    const Index end = std::min(y.size(), window_offset + n);
    for (Index i = window_offset; i < end; ++i) window(i - window_offset) = y(i);
  };

  std::vector<Index> ed1(count), ed2(count), d1(count), d2(count);
  std::vector<double> dc1(count, -2.0), dc2(count);
  Eigen::ArrayXd y;
  for (Index bp = 0; bp < count; ++bp) {
    ed1[bp] = refine_envelope_delay(ref, deg, utt_start, bps[bp], estimate, p, fft, &y);
    overlay(y);
    ed2[bp] = refine_envelope_delay(ref, deg, bps[bp], utt_end, estimate, p, fft, &y);
    overlay(y);
  }

  DelayHistogram hist(p, window);

  auto read_peak = [&](Index est, Index& d, double& dc) {
    double peak = 0.0;
    d = est + histogram_peak(hist.values(), &peak);
    dc = hist.sum() > 0.0 ? peak / hist.sum() : 0.0;
  };

  while (true) {
    Index bp = 0;
    while (bp < count && dc1[bp] > -2.0) ++bp;
    if (bp >= count) break;

    const Index est = ed1[bp];
    hist.reset();
    Index startr = utt_start * ds;
    Index startd = startr + est;
    if (startd < 0) {
      startr = -est;
      startd = 0;
    }
    auto forward_to = [&](Index limit) {
      while (startd + n <= deg.length && startr + n <= limit * ds) {
        hist.analyse(ref, deg, startr, startd, fft, [&](Index i, double v_max) {
          hist.add_spread(i, v_max, kernel);
        });
        startr += n / 4;
        startd += n / 4;
      }
    };
    forward_to(bps[bp]);
    read_peak(est, d1[bp], dc1[bp]);
    while (bp < count - 1) {
      ++bp;
      if (ed1[bp] == est && dc1[bp] <= -2.0) {
        forward_to(bps[bp]);
        read_peak(est, d1[bp], dc1[bp]);
      }
    }
  }

  for (Index bp = 0; bp < count; ++bp) dc2[bp] = dc1[bp] > confidence ? -2.0 : 0.0;
  while (true) {
    Index bp = count - 1;
    while (bp >= 0 && dc2[bp] > -2.0) --bp;
    if (bp < 0) break;

    const Index est = ed2[bp];
    hist.reset();
    Index startr = utt_end * ds - n;
    Index startd = startr + est;
    if (startd + n > deg.length) {
      startd = deg.length - n;
      startr = startd - est;
    }
    auto backward_to = [&](Index limit) {
      while (startd >= 0 && startr >= limit * ds) {
        hist.analyse(ref, deg, startr, startd, fft, [&](Index i, double v_max) {
          hist.add_spread(i, v_max, kernel);
        });
        startr -= n / 4;
        startd -= n / 4;
      }
    };
    backward_to(bps[bp]);
    read_peak(est, d2[bp], dc2[bp]);
    while (bp > 0) {
      --bp;
      if (ed2[bp] == est && dc2[bp] <= -2.0) {
        backward_to(bps[bp]);
        read_peak(est, d2[bp], dc2[bp]);
      }
    }
  }

  std::optional<SplitChoice> best;
  double best_sum = 0.0;
  for (Index bp = 0; bp < count; ++bp) {
    if (std::abs(d2[bp] - d1[bp]) >= ds && dc1[bp] + dc2[bp] > best_sum &&
        dc1[bp] > confidence && dc2[bp] > confidence) {
      best = SplitChoice{ed1[bp], d1[bp], ed2[bp], d2[bp], bps[bp], dc1[bp], dc2[bp]};
      best_sum = dc1[bp] + dc2[bp];
    }
  }
  return best;
}

// Extends utterance bounds to the midpoints of the gaps between them and
// keeps the delayed bounds inside the degraded signal.
void settle_bounds(std::vector<Utterance>& utts, Index vad_length,
                   Index deg_length, const RateParams& p) {
  const Index ds = p.downsample;
  const Index g = kSearchBuffer * ds;
  const Index last = static_cast<Index>(utts.size()) - 1;
  utts.front().start = kSearchBuffer;
  utts.back().end = vad_length - kSearchBuffer;
  for (Index u = 1; u <= last; ++u) {
    const Index mid = (utts[u].start + utts[u - 1].end) / 2;
    utts[u].start = mid;
    utts[u - 1].end = mid;
  }

  if (utts.front().start * ds + utts.front().delay < g) {
    utts.front().start = kSearchBuffer + (ds - 1 - utts.front().delay) / ds;
  }
  if (utts.back().end * ds + utts.back().delay > deg_length - g) {
    utts.back().end = (deg_length - utts.back().delay) / ds - kSearchBuffer;
  }

  for (Index u = 1; u <= last; ++u) {
    const Index start = utts[u].start * ds + utts[u].delay;
    const Index end = utts[u - 1].end * ds + utts[u - 1].delay;
    if (start < end) {
      const Index mid = (start + end) / 2;
      utts[u].start = (ds - 1 + mid - utts[u].delay) / ds;
      utts[u - 1].end = (mid - utts[u - 1].delay) / ds;
    }
  }
}

void split_utterances(const AlignmentTrack& ref, const AlignmentTrack& deg,
                      std::vector<Utterance>& utts, const RateParams& p,
                      RealFft& fft) {
  const Index ds = p.downsample;
  std::size_t id = 0;
  while (id < utts.size() && static_cast<Index>(utts.size()) < kMaxUtterances) {
    const Utterance u = utts[id];
    Index speech_start = u.start;
    while (speech_start < u.end && ref.vad(speech_start) <= 0.0) ++speech_start;
    Index speech_end = u.end;
    while (speech_end > u.start && ref.vad(speech_end) <= 0.0) --speech_end;
    ++speech_end;

    if (speech_end - speech_start < 200) {
      ++id;
      continue;
    }
    const auto choice = split_align(ref, deg, u.start, speech_start, speech_end,
                                    u.end, u.delay_estimate, u.confidence, p, fft);
    if (!choice || !(choice->dc1 > u.confidence && choice->dc2 > u.confidence)) {
      ++id;
      continue;
    }

    Utterance first{u.start, choice->breakpoint, choice->d1, choice->ed1, choice->dc1};
    Utterance second{choice->breakpoint, u.end, choice->d2, choice->ed2, choice->dc2};
    if (choice->d2 >= choice->d1) {
      const Index shift = (choice->d2 - choice->d1) / (2 * ds);
      first.end = choice->breakpoint + shift;
      second.start = choice->breakpoint - shift;
    }
    if ((first.start - kSearchBuffer) * ds + choice->d1 < 0) {
      first.start = kSearchBuffer + (ds - 1 - choice->d1) / ds;
    }
    if (second.end * ds + choice->d2 > deg.length - kSearchBuffer * ds) {
      second.end = (deg.length - choice->d2) / ds - kSearchBuffer;
    }
    utts[id] = first;
    utts.insert(utts.begin() + static_cast<std::ptrdiff_t>(id) + 1, second);
  }
}

}  // namespace

AlignmentTrack make_alignment_track(const PaddedSignal& filtered,
                                    const RateParams& p) {
  AlignmentTrack t;
  t.data = filtered.data;
  t.length = filtered.length;
  dc_block(t.data, t.length, p);
  sos_filter(t.data, p.align_iir);
  speech_activity(t, p);
  return t;
}

Index histogram_peak(const Eigen::Ref<const Eigen::ArrayXd>& h, double* peak) {
  const Index n = h.size();
  auto signed_delay = [n](Index i) { return i >= n / 2 ? i - n : i; };
  double best = 0.0;
  Index best_delay = 0;
  for (Index i = 0; i < n; ++i) {
    const Index d = signed_delay(i);
    const bool higher = h(i) > best;
    const bool tie_closer =
        h(i) == best && best > 0.0 &&
        (std::abs(d) < std::abs(best_delay) ||
         (std::abs(d) == std::abs(best_delay) && d > best_delay));
    if (higher || tie_closer) {
      best = h(i);
      best_delay = d;
    }
  }
  if (peak) *peak = best;
  return best_delay;
}

Index estimate_crude_delay(const AlignmentTrack& ref, const AlignmentTrack& deg,
                           const RateParams& p, RealFft& fft) {
  const Index nr = ref.length / p.downsample;
  const Index nd = deg.length / p.downsample;
  return envelope_lag(ref.log_vad, 0, nr, deg.log_vad, 0, nd, fft) * p.downsample;
}

std::vector<UtteranceSpan> detect_utterances(const AlignmentTrack& ref,
                                             Index deg_length, Index crude_delay,
                                             const RateParams& p) {
  const Index ds = p.downsample;
  const Index n = ref.length / ds;
  const Index lo = kMinUtteranceLength - crude_delay / ds;
  const Index hi = (deg_length - crude_delay) / ds - kMinUtteranceLength;

  std::vector<UtteranceSpan> spans;
  bool active = false;
  Index start = 0;
  for (Index i = 0; i < n; ++i) {
    const double v = ref.vad(i);
    if (v > 0.0 && !active) {
      active = true;
      start = i;
    }
    if ((v == 0.0 || i == n - 1) && active) {
      active = false;
      if (i - start >= kMinUtteranceLength && start < hi && i > lo) {
        spans.push_back({start, i, std::max<Index>(start - kSearchBuffer, 0),
                         std::min(i + kSearchBuffer, n - 1)});
      }
    }
  }
  return spans;
}

AlignmentResult align_utterances(const AlignmentTrack& ref,
                                 const AlignmentTrack& deg, Index crude_delay,
                                 const std::vector<UtteranceSpan>& spans,
                                 const RateParams& p, RealFft& fft) {
  AlignmentResult result;
  result.crude_delay = crude_delay;
  if (spans.empty()) return result;

  auto& utts = result.utterances;
  for (const auto& s : spans) {
    Utterance u;
    u.start = s.start;
    u.end = s.end;
    u.delay_estimate = refine_envelope_delay(ref, deg, s.search_start,
                                             s.search_end, crude_delay, p, fft);
    time_align(ref, deg, s.search_start, s.search_end, u, p, fft);
    utts.push_back(u);
  }
  settle_bounds(utts, ref.length / p.downsample, deg.length, p);
  split_utterances(ref, deg, utts, p, fft);
  return result;
}

AlignmentResult align(const AudioSignal& ref, const AudioSignal& deg,
                      const PesqConfig& cfg) {
  const LevelAlignment levels = fix_levels(ref, deg, cfg);
  const RateParams& p = rate_params(cfg.rate);
  RealFft fft;
  PaddedSignal r = pad(levels.ref.channel(0), p);
  PaddedSignal d = pad(levels.deg.channel(0), p);
  input_filter(r, cfg, fft);
  input_filter(d, cfg, fft);
  const AlignmentTrack rt = make_alignment_track(r, p);
  const AlignmentTrack dt = make_alignment_track(d, p);
  const Index crude = estimate_crude_delay(rt, dt, p, fft);
  return align_utterances(rt, dt, crude, detect_utterances(rt, d.length, crude, p),
                          p, fft);
}

}  // namespace pesq
