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

#ifndef PESQ_CONFIG_HPP_
#define PESQ_CONFIG_HPP_

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string_view>

namespace pesq {

enum class Band { kNarrow, kWide };
enum class Output { kRaw, kMosLqo };

struct PesqConfig {
  int rate = 16000;
  Band band = Band::kNarrow;
  Output output = Output::kRaw;
  bool corrigendum2 = false;
};

// Throws kInvalidConfig when the combination cannot be scored.
void validate(const PesqConfig& cfg);

// The four published variants, named as on the command line.
enum class Mode { kNbRaw, kNbLqo, kWb, kWbC2 };

PesqConfig config_for(Mode mode, int rate);
std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);
// Recommendation string, e.g. "P.862.2 + Corrigendum 2".
std::string_view mode_provenance(Mode mode);

// Rate-dependent constants of the measurement.
struct RateParams {
  int rate;
  Eigen::Index downsample;   // samples per envelope window
  Eigen::Index align_nfft;   // fine alignment transform length
  Eigen::Index frame_len;    // perceptual model frame length
  Eigen::Index num_bands;
  double power_scale;
  double loudness_scale;
  std::span<const double> align_iir;
  std::span<const int> bins_per_band;
  std::span<const double> band_centre_bark;
  std::span<const double> band_width_bark;
  std::span<const double> power_density_correction;
  std::span<const double> absolute_threshold;

  // Zero guard in front of and behind the signal, in samples.
  Eigen::Index guard() const { return 75 * downsample; }
  // Extra zero tail behind the trailing guard, in samples.
  Eigen::Index tail() const { return 320 * (rate / 1000); }
};

const RateParams& rate_params(int rate);

}  // namespace pesq

#endif  // PESQ_CONFIG_HPP_
