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

#include <nlohmann/json.hpp>
#include <algorithm>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "pesq/signal_io.hpp"
#include "test_util.hpp"

namespace pesq {
namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "pesq");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto corpus = testing::conformance_corpus();
    for (int i : {1, 2, 3}) {
      const auto pair = testing::make_pair(corpus[i]);
      const std::string r = (dir_ / (corpus[i].id + "_ref.wav")).string();
      const std::string d = (dir_ / (corpus[i].id + "_deg.wav")).string();
      write_wav(r, pair.ref);
      write_wav(d, pair.deg);
      pairs_.push_back({r, d});
    }
    const auto st = testing::make_pair(corpus[36]);
    stereo_ = {(dir_ / "st_ref.wav").string(), (dir_ / "st_deg.wav").string()};
    write_wav(stereo_.first, st.ref);
    write_wav(stereo_.second, st.deg);
    std::ofstream m(dir_ / "manifest.csv");
    m << "ref,deg\n";
    for (const auto& [r, d] : pairs_) m << r << ',' << d << '\n';
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  testing::TempDir dir_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::pair<std::string, std::string> stereo_;
};

TEST_F(CliTest, IdentityPairPrintsTopScore) {
  const auto& r = pairs_[0].first;
  const CliRun res = run({"score", "--ref", r, "--deg", r, "--rate", "16000", "--mode", "nb-raw"});
  EXPECT_EQ(res.code, 0) << res.err;
  EXPECT_EQ(res.out, "4.500 nb-raw\n");
}

TEST_F(CliTest, WidebandAt8kIsAFlagError) {
  const auto& [r, d] = pairs_[0];
  const CliRun res = run({"score", "--ref", r, "--deg", d, "--rate", "8000", "--mode", "wb"});
  EXPECT_EQ(res.code, 2);
  EXPECT_NE(res.err.find("wideband requires 16000 Hz"), std::string::npos);
}

TEST_F(CliTest, FlagErrors) {
  const auto& [r, d] = pairs_[0];
  EXPECT_EQ(run({"score", "--ref", r, "--deg", d, "--rate", "16000"}).code, 2);  // no mode
  EXPECT_EQ(run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "x"}).code, 2);
  EXPECT_EQ(run({"score", "--ref", r, "--deg", d, "--rate", "44100", "--mode", "nb-raw"}).code,
            2);
  EXPECT_EQ(run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "nb-raw",
                 "--stereo", "mix"})
                .code,
            2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST_F(CliTest, ScoringErrorsExitOne) {
  const auto& [r, d] = pairs_[0];
  CliRun res = run({"score", "--ref", r, "--deg", path("nope.wav"), "--rate", "16000", "--mode",
                 "nb-raw"});
  EXPECT_EQ(res.code, 1);
  EXPECT_FALSE(res.err.empty());
  res = run({"score", "--ref", r, "--deg", d, "--rate", "8000", "--mode", "nb-raw"});
  EXPECT_EQ(res.code, 1);  // file rate differs from --rate
}

TEST_F(CliTest, TextHasThreeDecimals) {
  const auto& [r, d] = pairs_[0];
  const CliRun res = run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "wb-c2"});
  EXPECT_EQ(res.code, 0);
  EXPECT_TRUE(std::regex_match(res.out, std::regex(R"(\d\.\d{3} wb-c2\n)"))) << res.out;
}

TEST_F(CliTest, JsonRoundTrips) {
  const auto& [r, d] = pairs_[1];
  const CliRun res = run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "nb-lqo",
                       "--format", "json"});
  ASSERT_EQ(res.code, 0) << res.err;
  const auto j = nlohmann::ordered_json::parse(res.out);
  EXPECT_EQ(j["mode"], "nb-lqo");
  EXPECT_EQ(j["provenance"], "P.862.1");
  EXPECT_EQ(j["strategy"], "dmx");
  EXPECT_EQ(j["score"], j["mos_lqo"]);
  EXPECT_TRUE(j.contains("raw"));
  EXPECT_EQ(nlohmann::ordered_json::parse(j.dump(2)).dump(2), j.dump(2));
  EXPECT_EQ(j.dump(2) + "\n", res.out);
}

TEST_F(CliTest, StereoStrategies) {
  const auto& [r, d] = stereo_;
  CliRun res = run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "wb", "--stereo",
                 "avg", "--format", "json"});
  ASSERT_EQ(res.code, 0) << res.err;
  const auto j = nlohmann::json::parse(res.out);
  EXPECT_EQ(j["per_channel"].size(), 2u);
  EXPECT_EQ(j["strategy"], "avg");

  res = run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "wb", "--stereo",
             "interleave"});
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.err.find("likely unintentional"), std::string::npos);

  res = run({"score", "--ref", r, "--deg", d, "--rate", "16000", "--mode", "wb", "--stereo",
             "per-channel"});
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.out.find("channel 1: "), std::string::npos);
}

TEST_F(CliTest, BatchIsReproducibleAndComparable) {
  const std::string manifest = path("manifest.csv");
  CliRun res = run({"batch", "--manifest", manifest, "--mode", "wb", "--rate", "16000", "--out",
                 path("wb.csv")});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NE(res.out.find("scored 3 of 3"), std::string::npos);
  run({"batch", "--manifest", manifest, "--mode", "wb", "--rate", "16000", "--out",
       path("wb2.csv")});
  EXPECT_EQ(testing::read_file(path("wb.csv")), testing::read_file(path("wb2.csv")));
  std::istringstream rows(testing::read_file(path("wb.csv")));
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(rows), {}, '\n'), 4);

  res = run({"batch", "--manifest", manifest, "--mode", "wb-c2", "--rate", "16000", "--out",
             path("c2.csv")});
  ASSERT_EQ(res.code, 0);
  res = run({"compare", "--a", path("wb.csv"), "--b", path("c2.csv"), "--scatter",
             path("scatter.csv"), "--report", path("report.json")});
  ASSERT_EQ(res.code, 0) << res.err;
  const auto j = nlohmann::json::parse(res.out);
  EXPECT_EQ(j["n"], 3);
  EXPECT_GT(j["mean_diff"].get<double>(), 0.0);
  EXPECT_EQ(nlohmann::json::parse(testing::read_file(path("report.json"))), j);
  EXPECT_EQ(testing::read_file(path("scatter.csv")).substr(0, 15), "label,a,b,diff\n");
}

TEST_F(CliTest, BatchFailures) {
  {
    std::ofstream m(path("bad.csv"));
    m << "ref,deg\n" << pairs_[0].first << ',' << path("gone.wav") << '\n';
  }
  CliRun res = run({"batch", "--manifest", path("bad.csv"), "--mode", "nb-raw", "--rate", "16000",
                 "--out", path("o.csv")});
  EXPECT_EQ(res.code, 1);
  {
    std::ofstream m(path("mixed.csv"));
    m << "ref,deg\n"
      << pairs_[0].first << ',' << path("gone.wav") << '\n'
      << pairs_[0].first << ',' << pairs_[0].second << '\n';
  }
  res = run({"batch", "--manifest", path("mixed.csv"), "--mode", "nb-raw", "--rate", "16000",
             "--out", path("o.csv")});
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.out.find("1 failed"), std::string::npos);
}

TEST_F(CliTest, CompareMismatchExitsOne) {
  {
    std::ofstream a(path("a.csv"));
    a << "ref,deg,score,error\nx,y,1.0,\nx,z,2.0,\n";
    std::ofstream b(path("b.csv"));
    b << "ref,deg,score,error\nx,y,1.0,\n";
  }
  EXPECT_EQ(run({"compare", "--a", path("a.csv"), "--b", path("b.csv")}).code, 1);
}

TEST_F(CliTest, Curve) {
  CliRun res = run({"curve", "--kind", "nb"});
  ASSERT_EQ(res.code, 0);
  std::istringstream in(res.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "raw,mos,diff");
  int rows = 0;
  double prev = -1.0;
  while (std::getline(in, line)) {
    const double mos = std::stod(line.substr(line.find(',') + 1));
    EXPECT_GT(mos, prev);
    prev = mos;
    ++rows;
  }
  EXPECT_EQ(rows, 1001);
  res = run({"curve", "--kind", "wb", "--points", "1", "--out", path("c.csv")});
  EXPECT_EQ(res.code, 0);
  EXPECT_EQ(std::count(res.out.begin(), res.out.end(), '\n'), 0);
  EXPECT_EQ(run({"curve", "--kind", "xx"}).code, 2);
}

}  // namespace
}  // namespace pesq
