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

#include "pesq/config.hpp"

#include <string>

#include "pesq/error.hpp"
#include "pesq/tables.hpp"

namespace pesq {

void validate(const PesqConfig& cfg) {
  if (cfg.rate != 8000 && cfg.rate != 16000) {
    throw Error(ErrorCode::kUnsupportedRate,
                "sample rate " + std::to_string(cfg.rate) +
                    " Hz is not supported; use 8000 or 16000 Hz");
  }
  if (cfg.band == Band::kWide && cfg.rate != 16000) {
    throw Error(ErrorCode::kInvalidConfig, "wideband requires 16000 Hz");
  }
  if (cfg.corrigendum2 && cfg.band != Band::kWide) {
    throw Error(ErrorCode::kInvalidConfig,
                "corrected filter applies to wideband only");
  }
  if (cfg.band == Band::kWide && cfg.output != Output::kMosLqo) {
    throw Error(ErrorCode::kInvalidConfig,
                "wideband produces MOS-LQO only, no raw score");
  }
}

PesqConfig config_for(Mode mode, int rate) {
  PesqConfig cfg;
  cfg.rate = rate;
  switch (mode) {
    case Mode::kNbRaw:
      break;
    case Mode::kNbLqo:
      cfg.output = Output::kMosLqo;
      break;
    case Mode::kWb:
      cfg.band = Band::kWide;
      cfg.output = Output::kMosLqo;
      break;
    case Mode::kWbC2:
      cfg.band = Band::kWide;
      cfg.output = Output::kMosLqo;
      cfg.corrigendum2 = true;
      break;
  }
  return cfg;
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kNbRaw: return "nb-raw";
    case Mode::kNbLqo: return "nb-lqo";
    case Mode::kWb: return "wb";
    case Mode::kWbC2: return "wb-c2";
  }
  return "";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::kNbRaw, Mode::kNbLqo, Mode::kWb, Mode::kWbC2}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view mode_provenance(Mode mode) {
  switch (mode) {
    case Mode::kNbRaw: return "P.862";
    case Mode::kNbLqo: return "P.862.1";
    case Mode::kWb: return "P.862.2";
    case Mode::kWbC2: return "P.862.2 + Corrigendum 2";
  }
  return "";
}

namespace {

const RateParams kParams8k{
    8000, 32, 512, 256, 42, 2.764344e-5, 1.866055e-1,
    tables::kAlignIir8k, tables::kBinsPerBand8k, tables::kBandCentreBark8k,
    tables::kBandWidthBark8k, tables::kPowerDensityCorrection8k,
    tables::kAbsoluteThreshold8k};

const RateParams kParams16k{
    16000, 64, 1024, 512, 49, 6.910853e-6, 1.866055e-1,
    tables::kAlignIir16k, tables::kBinsPerBand16k, tables::kBandCentreBark16k,
    tables::kBandWidthBark16k, tables::kPowerDensityCorrection16k,
    tables::kAbsoluteThreshold16k};

}  // namespace

const RateParams& rate_params(int rate) {
  if (rate == 8000) return kParams8k;
  if (rate == 16000) return kParams16k;
  throw Error(ErrorCode::kUnsupportedRate,
              "sample rate " + std::to_string(rate) +
                  " Hz is not supported; use 8000 or 16000 Hz");
}

}  // namespace pesq
