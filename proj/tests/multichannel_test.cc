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
#include "pesq/multichannel.hpp"
#include "pesq/pesq.hpp"
#include "test_util.hpp"

namespace pesq {
namespace {

AudioSignal stack(const AudioSignal& a, const AudioSignal& b) {
  Eigen::ArrayXXd x(a.frames(), 2);
  x << a.channel(0), b.channel(0);
  return AudioSignal(x, a.rate());
}

TEST(MultichannelTest, DualMonoStrategiesAgree) {
  const auto pair = testing::make_pair(testing::conformance_corpus()[27]);
  const auto cfg = config_for(Mode::kNbLqo, 8000);
  const double mono = *compute_pesq(pair.ref, pair.deg, cfg).mos_lqo;
  const AudioSignal r = stack(pair.ref, pair.ref), d = stack(pair.deg, pair.deg);
  EXPECT_EQ(score_multichannel(r, d, cfg, StereoStrategy::kMonoDownmix).score, mono);
  const auto avg = score_multichannel(r, d, cfg, StereoStrategy::kAverageScores);
  EXPECT_EQ(avg.score, mono);
  ASSERT_EQ(avg.per_channel.size(), 2u);
  EXPECT_EQ(avg.per_channel[0], mono);
  const auto per = score_multichannel(r, d, cfg, StereoStrategy::kPerChannel);
  EXPECT_EQ(per.per_channel, avg.per_channel);
  // Interleaving dual-mono is recorded, not asserted equal to mono.
  const double inter = score_multichannel(r, d, cfg, StereoStrategy::kInterleave).score;
  EXPECT_GE(inter, 0.999);
  EXPECT_LE(inter, 4.999);
}

TEST(MultichannelTest, AverageIsInvariantUnderChannelSwap) {
  const auto pair = testing::make_pair(testing::conformance_corpus()[40]);
  const auto cfg = config_for(Mode::kNbRaw, 8000);
  auto swap = [](const AudioSignal& s) {
    Eigen::ArrayXXd x(s.frames(), 2);
    x << s.channel(1), s.channel(0);
    return AudioSignal(x, s.rate());
  };
  const auto a = score_multichannel(pair.ref, pair.deg, cfg, StereoStrategy::kAverageScores);
  const auto b =
      score_multichannel(swap(pair.ref), swap(pair.deg), cfg, StereoStrategy::kAverageScores);
  EXPECT_DOUBLE_EQ(a.score, b.score);
  EXPECT_EQ(a.per_channel[0], b.per_channel[1]);
}

TEST(MultichannelTest, MonoInputsDegenerate) {
  const AudioSignal s = testing::speech(71, 8000);
  const auto cfg = config_for(Mode::kNbRaw, 8000);
  EXPECT_EQ(score_multichannel(s, s, cfg, StereoStrategy::kMonoDownmix).score, 4.5);
  const auto per = score_multichannel(s, s, cfg, StereoStrategy::kPerChannel);
  EXPECT_EQ(per.per_channel, std::vector<double>{4.5});
  EXPECT_THROW(score_multichannel(s, s, cfg, StereoStrategy::kInterleave), Error);
}

TEST(MultichannelTest, ChannelMismatch) {
  const AudioSignal s = testing::speech(72, 8000);
  try {
    score_multichannel(s, stack(s, s), config_for(Mode::kNbRaw, 8000),
                       StereoStrategy::kMonoDownmix);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kChannelMismatch);
  }
}

TEST(MultichannelTest, StrategyNames) {
  for (auto s : {StereoStrategy::kMonoDownmix, StereoStrategy::kAverageScores,
                 StereoStrategy::kPerChannel, StereoStrategy::kInterleave}) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  }
  EXPECT_EQ(kDefaultStrategy, StereoStrategy::kMonoDownmix);
  EXPECT_NE(kInterleaveNotice.find("likely unintentional"), std::string_view::npos);
}

}  // namespace
}  // namespace pesq
