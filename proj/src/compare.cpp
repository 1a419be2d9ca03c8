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

#include "pesq/compare.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pesq/error.hpp"
#include "pesq/signal_io.hpp"

namespace pesq {

namespace {

// One CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::kInvalidArgument, "unterminated quote in CSV line");
  return fields;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool blank(const std::string& line) { return trim(line).empty(); }

}  // namespace

ComparisonStats compare(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score vectors differ in length (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "comparison needs at least two scores");
  }
  if (!a.isFinite().all() || !b.isFinite().all()) {
    throw Error(ErrorCode::kInvalidArgument, "score vectors contain non-finite values");
  }
  const Eigen::ArrayXd diff = b - a;
  ComparisonStats s;
  s.n = a.size();
  s.pearson_rho = pearson(a, b);
  s.rmse = std::sqrt(diff.square().mean());
  s.mean_diff = diff.mean();
  s.max_abs_diff = diff.abs().maxCoeff();
  return s;
}

std::vector<ScatterRow> scatter_data(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b,
                                     const std::vector<std::string>& labels) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "score vectors differ in length");
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != a.size()) {
    throw Error(ErrorCode::kInvalidArgument, "label count differs from score count");
  }
  std::vector<ScatterRow> rows;
  rows.reserve(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    rows.push_back({labels.empty() ? std::to_string(i + 1) : labels[i], a(i), b(i),
                    b(i) - a(i)});
  }
  return rows;
}

void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "label,a,b,diff\n";
  for (const auto& r : rows) {
    out << quote_csv(r.label) << ',' << r.a << ',' << r.b << ',' << r.diff << '\n';
  }
  out.precision(old);
}

std::string stats_json(const ComparisonStats& stats) {
  nlohmann::ordered_json j;
  j["n"] = stats.n;
  if (stats.pearson_rho) {
    j["pearson_rho"] = *stats.pearson_rho;
  } else {
    j["pearson_rho"] = "undefined";
  }
  j["rmse"] = stats.rmse;
  j["mean_diff"] = stats.mean_diff;
  j["max_abs_diff"] = stats.max_abs_diff;
  j["failures"] = stats.failures;
  return j.dump(2);
}

std::vector<ManifestEntry> parse_manifest(std::istream& in,
                                          const std::filesystem::path& base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) break;
  }
  const auto header = split_csv(line);
  if (header.size() < 2 || trim(header[0]) != "ref" || trim(header[1]) != "deg") {
    throw Error(ErrorCode::kInvalidArgument, "manifest header must be `ref,deg`");
  }
  std::vector<ManifestEntry> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto f = split_csv(line);
    if (f.size() < 2 || trim(f[0]).empty() || trim(f[1]).empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "manifest line " + std::to_string(line_no) + " needs two paths");
    }
    auto resolve = [&base](const std::string& s) {
      const std::filesystem::path p(trim(s));
      return p.is_absolute() || base.empty() ? p : base / p;
    };
    out.push_back({resolve(f[0]), resolve(f[1])});
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

Eigen::ArrayXd BatchResult::scores() const {
  std::vector<double> v;
  for (const auto& item : items) {
    if (item.score) v.push_back(*item.score);
  }
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::Index BatchResult::failures() const {
  return std::count_if(items.begin(), items.end(),
                       [](const BatchItem& i) { return !i.score; });
}

BatchResult batch_score(const std::vector<ManifestEntry>& manifest, const PesqConfig& cfg,
                        StereoStrategy strategy) {
  BatchResult result;
  result.items.reserve(manifest.size());
  for (const auto& entry : manifest) {
    BatchItem item{entry, std::nullopt, {}, {}};
    try {
      const MultichannelScore s =
          score_multichannel(read_wav(entry.ref), read_wav(entry.deg), cfg, strategy);
      item.score = s.score;
      item.per_channel = s.per_channel;
    } catch (const Error& e) {
      item.error = e.what();
    }
    result.items.push_back(std::move(item));
  }
  return result;
}

void write_batch_csv(std::ostream& out, const BatchResult& result) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "ref,deg,score,error\n";
  for (const auto& item : result.items) {
    out << quote_csv(item.entry.ref.string()) << ',' << quote_csv(item.entry.deg.string())
        << ',';
    if (item.score) out << *item.score;
    out << ',' << quote_csv(item.error) << '\n';
  }
  out.precision(old);
}

ScoreTable read_score_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kInvalidArgument, "empty score file");
  const auto header = split_csv(line);
  const auto col = std::find(header.begin(), header.end(), "score");
  if (header.size() < 3 || header[0] != "ref" || header[1] != "deg" || col == header.end()) {
    throw Error(ErrorCode::kInvalidArgument, "score file header must start with `ref,deg`"
                                             " and contain `score`");
  }
  const std::size_t score_col = col - header.begin();
  ScoreTable t;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    const auto f = split_csv(line);
    if (f.size() <= score_col) throw Error(ErrorCode::kInvalidArgument, "short score row");
    t.labels.push_back(f[0] + "|" + f[1]);
    const std::string s = trim(f[score_col]);
    if (s.empty()) {
      t.scores.push_back(std::nullopt);
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw Error(ErrorCode::kInvalidArgument, "bad score `" + s + "`");
    t.scores.push_back(v);
  }
  return t;
}

ComparisonStats compare_tables(const ScoreTable& a, const ScoreTable& b,
                               std::vector<ScatterRow>* scatter) {
  if (a.scores.size() != b.scores.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score files differ in length (" + std::to_string(a.scores.size()) +
                    " vs " + std::to_string(b.scores.size()) + " rows)");
  }
  std::vector<double> va, vb;
  std::vector<std::string> labels;
  Eigen::Index failures = 0;
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    if (!a.scores[i] || !b.scores[i]) {
      ++failures;
      continue;
    }
    va.push_back(*a.scores[i]);
    vb.push_back(*b.scores[i]);
    labels.push_back(a.labels[i]);
  }
  const Eigen::Map<const Eigen::ArrayXd> ma(va.data(), static_cast<Eigen::Index>(va.size()));
  const Eigen::Map<const Eigen::ArrayXd> mb(vb.data(), static_cast<Eigen::Index>(vb.size()));
  ComparisonStats s = compare(ma, mb);
  s.failures = failures;
  if (scatter) *scatter = scatter_data(ma, mb, labels);
  return s;
}

}  // namespace pesq
