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

#include "pesq/dsp.hpp"

#include <cmath>
#include <numbers>

namespace pesq {

Eigen::ArrayXd hann_window(Eigen::Index n) {
  const Eigen::ArrayXd k = Eigen::ArrayXd::LinSpaced(n, 0, n - 1);
  return 0.5 * (1.0 - (2.0 * std::numbers::pi / n * k).cos());
}

RealFft::RealFft() { fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum); }

Eigen::ArrayXcd RealFft::forward(const Eigen::Ref<const Eigen::ArrayXd>& x,
                                 Eigen::Index n) {
  time_.setZero(n);
  const Eigen::Index m = std::min(n, x.size());
  time_.head(m) = x.head(m).matrix();
  fft_.fwd(freq_, time_);
  return freq_.array();
}

Eigen::ArrayXd RealFft::inverse(const Eigen::Ref<const Eigen::ArrayXcd>& half,
                                Eigen::Index n) {
  freq_ = half.matrix();
  fft_.inv(time_, freq_, n);
  return time_.array();
}

double interpolate_curve(double f, Curve curve) {
  const std::size_t n = curve.size();
  std::size_t hi;
  if (f <= curve[0][0]) {
    hi = 1;
  } else if (f >= curve[n - 1][0]) {
    hi = n - 1;
  } else {
    hi = 1;
    while (curve[hi][0] < f) ++hi;
  }
  const auto& [f_lo, g_lo] = curve[hi - 1];
  const auto& [f_hi, g_hi] = curve[hi];
  return ((f - f_lo) * g_hi + (f_hi - f) * g_lo) / (f_hi - f_lo);
}

void curve_filter(Eigen::Ref<Eigen::ArrayXd> block, int rate, Curve curve,
                  RealFft& fft) {
  const Eigen::Index n = next_pow2(block.size());
  Eigen::ArrayXcd spectrum = fft.forward(block, n);
  const double reference = interpolate_curve(1000.0, curve);
  const double resolution = static_cast<double>(rate) / n;
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    const double db = interpolate_curve(k * resolution, curve) - reference;
    spectrum(k) *= std::pow(10.0, db / 20.0);
  }
  block = fft.inverse(spectrum, n).head(block.size());
}

Eigen::ArrayXd cross_correlate(const Eigen::Ref<const Eigen::ArrayXd>& x1,
                               const Eigen::Ref<const Eigen::ArrayXd>& x2,
                               RealFft& fft) {
  const Eigen::Index n1 = x1.size(), n2 = x2.size();
  const Eigen::Index n = next_pow2(n1 + n2 - 1);
  const Eigen::ArrayXd reversed = x1.reverse();
  const Eigen::ArrayXcd product = fft.forward(reversed, n) * fft.forward(x2, n);
  return fft.inverse(product, n).head(n1 + n2 - 1);
}

}  // namespace pesq
