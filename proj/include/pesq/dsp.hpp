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

#ifndef PESQ_DSP_HPP_
#define PESQ_DSP_HPP_

#include <Eigen/Core>
#include <array>
#include <complex>
#include <span>
#include <unsupported/Eigen/FFT>

namespace pesq {

inline Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index c = 1;
  while (c < n) c <<= 1;
  return c;
}

// Periodic Hann window of length n.
Eigen::ArrayXd hann_window(Eigen::Index n);

// Real transform returning n/2 + 1 bins; the inverse includes the 1/n scale.
class RealFft {
 public:
  RealFft();

  Eigen::ArrayXcd forward(const Eigen::Ref<const Eigen::ArrayXd>& x,
                          Eigen::Index n);
  Eigen::ArrayXd inverse(const Eigen::Ref<const Eigen::ArrayXcd>& half,
                         Eigen::Index n);

 private:
  Eigen::FFT<double> fft_;
  Eigen::VectorXd time_;
  Eigen::VectorXcd freq_;
};

// Cascade of second-order sections {b0, b1, b2, a1, a2}, zero initial state,
// filtered in place.
template <typename Derived>
void sos_filter(Eigen::ArrayBase<Derived>& x, std::span<const double> sections) {
  using Scalar = typename Derived::Scalar;
  for (std::size_t s = 0; s + 5 <= sections.size(); s += 5) {
    const Scalar b0 = sections[s], b1 = sections[s + 1], b2 = sections[s + 2];
    const Scalar a1 = sections[s + 3], a2 = sections[s + 4];
    Scalar z1 = 0, z2 = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const Scalar z0 = x(i) - a1 * z1 - a2 * z2;
      x(i) = b0 * z0 + b1 * z1 + b2 * z2;
      z2 = z1;
      z1 = z0;
    }
  }
}

template <typename Derived>
void sos_filter(Eigen::ArrayBase<Derived>&& x, std::span<const double> sections) {
  sos_filter(x, sections);
}

using Curve = std::span<const std::array<double, 2>>;

// Piecewise-linear gain in dB at frequency f, extrapolating past either end.
double interpolate_curve(double f, Curve curve);

// Zero-phase filtering in the frequency domain: the block is zero-padded to
// a power of two and weighted by the curve normalized to its 1 kHz gain.
void curve_filter(Eigen::Ref<Eigen::ArrayXd> block, int rate, Curve curve,
                  RealFft& fft);

// Full linear cross-correlation, y[m] = sum_j x1[j] x2[j + m - n1 + 1],
// m in [0, n1 + n2 - 1). Index n1 - 1 is zero lag.
Eigen::ArrayXd cross_correlate(const Eigen::Ref<const Eigen::ArrayXd>& x1,
                               const Eigen::Ref<const Eigen::ArrayXd>& x2,
                               RealFft& fft);

}  // namespace pesq

#endif  // PESQ_DSP_HPP_
