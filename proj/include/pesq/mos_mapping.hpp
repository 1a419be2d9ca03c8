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

#ifndef PESQ_MOS_MAPPING_HPP_
#define PESQ_MOS_MAPPING_HPP_

#include <Eigen/Core>
#include <ostream>

namespace pesq {

enum class MappingKind { kNarrowband, kWideband };

// Logistic maps onto (0.999, 4.999).
double map_nb_lqo(double raw);
double map_wb_lqo(double raw_internal);
double map_lqo(MappingKind kind, double raw);

template <typename Derived>
Eigen::ArrayXd map_lqo(MappingKind kind, const Eigen::ArrayBase<Derived>& raw) {
  return raw.derived().unaryExpr([kind](double x) { return map_lqo(kind, x); });
}

// Columns raw, mos, diff (mos - raw).
struct MappingCurve {
  Eigen::ArrayXd raw;
  Eigen::ArrayXd mos;
  Eigen::ArrayXd diff;
};

inline constexpr Eigen::Index kDefaultCurvePoints = 1001;

// Uniform grid over the raw score range [-0.5, 4.5].
Eigen::ArrayXd default_curve_grid(Eigen::Index points = kDefaultCurvePoints);

MappingCurve mapping_curve(MappingKind kind, const Eigen::ArrayXd& grid);

// Header `raw,mos,diff`, full precision.
void write_curve_csv(std::ostream& out, const MappingCurve& curve);

}  // namespace pesq

#endif  // PESQ_MOS_MAPPING_HPP_
