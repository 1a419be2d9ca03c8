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

#include <gtest/gtest.h>

#include "pesq/error.hpp"
#include "pesq/front_end.hpp"
#include "test_util.hpp"

namespace pesq {
namespace {

PesqConfig nb16() { return config_for(Mode::kNbRaw, 16000); }

TEST(FrontEndTest, TargetLevelIsAFixedPoint) {
  const AudioSignal s = testing::speech(21, 16000);
  const LevelAlignment first = fix_levels(s, s, nb16());
  EXPECT_GT(first.ref_gain, 0.0);
  const LevelAlignment again = fix_levels(first.ref, first.deg, nb16());
  EXPECT_NEAR(again.ref_gain, 1.0, 1e-9);
  EXPECT_NEAR(again.deg_gain, 1.0, 1e-9);
}

TEST(FrontEndTest, HalfAmplitudeDoublesTheGain) {
  const AudioSignal s = fix_levels(testing::speech(22, 8000), testing::speech(22, 8000),
                                   config_for(Mode::kNbRaw, 8000))
                            .ref;
  const AudioSignal half(s.samples() * 0.5, 8000);
  const LevelAlignment l = fix_levels(s, half, config_for(Mode::kNbRaw, 8000));
  EXPECT_NEAR(l.ref_gain, 1.0, 1e-9);
  EXPECT_NEAR(l.deg_gain / 2.0, 1.0, 1e-9);
}

TEST(FrontEndTest, SilentInputIsAnError) {
  const AudioSignal s = testing::speech(23, 16000);
  const AudioSignal zero(Eigen::ArrayXXd::Zero(s.frames(), 1), 16000);
  try {
    fix_levels(s, zero, nb16());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSilentInput);
    EXPECT_NE(std::string(e.what()).find("silent input"), std::string::npos);
  }
}

TEST(FrontEndTest, FiltersMapZeroToZero) {
  const AudioSignal zero(Eigen::ArrayXXd::Zero(8000, 1), 16000);
  for (Mode m : {Mode::kNbRaw, Mode::kWb, Mode::kWbC2}) {
    const AudioSignal y = input_filter(zero, config_for(m, 16000));
    EXPECT_EQ(y.frames(), zero.frames());
    EXPECT_TRUE((y.samples() == 0.0).all());
  }
}

TEST(FrontEndTest, FiltersAreHomogeneous) {
  const AudioSignal s = testing::speech(24, 16000, 1.0);
  const AudioSignal k(s.samples() * 3.7, 16000);
  for (Mode m : {Mode::kNbRaw, Mode::kWb, Mode::kWbC2}) {
    const auto cfg = config_for(m, 16000);
    const Eigen::ArrayXXd a = input_filter(s, cfg).samples() * 3.7;
    const Eigen::ArrayXXd b = input_filter(k, cfg).samples();
    EXPECT_LE((a - b).abs().maxCoeff(), 1e-9 * a.abs().maxCoeff()) << mode_name(m);
  }
}

TEST(FrontEndTest, CorrectedWidebandFilterIsQuieter) {
  const AudioSignal s = testing::speech(25, 16000, 1.0);
  const double plain = input_filter(s, config_for(Mode::kWb, 16000)).samples().square().sum();
  const double fixed = input_filter(s, config_for(Mode::kWbC2, 16000)).samples().square().sum();
  EXPECT_NEAR(fixed / plain, 0.251188 * 0.251188, 1e-9);
}

}  // namespace
}  // namespace pesq
