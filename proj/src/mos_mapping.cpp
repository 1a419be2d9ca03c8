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

#include "pesq/mos_mapping.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

#include "pesq/error.hpp"

namespace pesq {

namespace {

double logistic(double x, double slope, double offset) {
  return 0.999 + 4.0 / (1.0 + std::exp(-slope * x + offset));
}

}  // namespace

double map_nb_lqo(double raw) { return logistic(raw, 1.4945, 4.6607); }

double map_wb_lqo(double raw_internal) {
  return logistic(raw_internal, 1.3669, 3.8224);
}

double map_lqo(MappingKind kind, double raw) {
  return kind == MappingKind::kNarrowband ? map_nb_lqo(raw) : map_wb_lqo(raw);
}

Eigen::ArrayXd default_curve_grid(Eigen::Index points) {
  return Eigen::ArrayXd::LinSpaced(points, -0.5, 4.5);
}

MappingCurve mapping_curve(MappingKind kind, const Eigen::ArrayXd& grid) {
  if (grid.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "mapping grid is empty");
  }
  if (!grid.isFinite().all()) {
    throw Error(ErrorCode::kInvalidArgument, "mapping grid has non-finite values");
  }
  MappingCurve c;
  c.raw = grid;
  c.mos = map_lqo(kind, grid);
  c.diff = c.mos - c.raw;
  return c;
}

void write_curve_csv(std::ostream& out, const MappingCurve& curve) {
  out << "raw,mos,diff\n";
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < curve.raw.size(); ++i) {
    out << curve.raw(i) << ',' << curve.mos(i) << ',' << curve.diff(i) << '\n';
  }
  out.precision(old);
}

}  // namespace pesq
