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

#ifndef PESQ_COMPARE_HPP_
#define PESQ_COMPARE_HPP_

#include <Eigen/Core>
#include <cmath>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pesq/config.hpp"
#include "pesq/multichannel.hpp"

namespace pesq {

struct ComparisonStats {
  Eigen::Index n = 0;
  // Empty when either vector has zero variance.
  std::optional<double> pearson_rho;
  double rmse = 0.0;
  double mean_diff = 0.0;  // mean(b - a)
  double max_abs_diff = 0.0;
  Eigen::Index failures = 0;
};

// Pearson correlation from centred dot products, so the n versus n-1
// convention cancels.
template <typename DerivedA, typename DerivedB>
std::optional<double> pearson(const Eigen::ArrayBase<DerivedA>& a,
                              const Eigen::ArrayBase<DerivedB>& b) {
  const Eigen::ArrayXd x = a - a.mean();
  const Eigen::ArrayXd y = b - b.mean();
  const double sxx = x.square().sum();
  const double syy = y.square().sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return (x * y).sum() / std::sqrt(sxx * syy);
}

ComparisonStats compare(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);

struct ScatterRow {
  std::string label;
  double a;
  double b;
  double diff;  // b - a
};

// Rows are labelled 1..n when `labels` is empty.
std::vector<ScatterRow> scatter_data(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b,
                                     const std::vector<std::string>& labels = {});

// `label,a,b,diff`.
void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows);

// {n, pearson_rho, rmse, mean_diff, max_abs_diff, failures}; an undefined rho
// is written as the string "undefined".
std::string stats_json(const ComparisonStats& stats);

struct ManifestEntry {
  std::filesystem::path ref;
  std::filesystem::path deg;
};

// CSV with header `ref,deg`; relative paths resolve against `base`.
std::vector<ManifestEntry> parse_manifest(std::istream& in,
                                          const std::filesystem::path& base = {});
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct BatchItem {
  ManifestEntry entry;
  std::optional<double> score;
  std::vector<double> per_channel;
  std::string error;
};

struct BatchResult {
  std::vector<BatchItem> items;  // manifest order

  Eigen::ArrayXd scores() const;  // successful items only
  Eigen::Index failures() const;
};

BatchResult batch_score(const std::vector<ManifestEntry>& manifest, const PesqConfig& cfg,
                        StereoStrategy strategy = kDefaultStrategy);

// `ref,deg,score,error`, scores at full precision, blank on failure.
void write_batch_csv(std::ostream& out, const BatchResult& result);

struct ScoreTable {
  std::vector<std::string> labels;
  std::vector<std::optional<double>> scores;
};

// Reads the CSV written by write_batch_csv; labels are `ref|deg`.
ScoreTable read_score_table(std::istream& in);

// Pairs two tables row by row; rows failed in either table count as failures.
ComparisonStats compare_tables(const ScoreTable& a, const ScoreTable& b,
                               std::vector<ScatterRow>* scatter = nullptr);

}  // namespace pesq

#endif  // PESQ_COMPARE_HPP_
