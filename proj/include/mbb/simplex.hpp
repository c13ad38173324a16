// Copyright 2025 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBB_SIMPLEX_HPP_
#define MBB_SIMPLEX_HPP_

#include <limits>
#include <string>
#include <vector>

namespace mbb {

enum class Relation { kLe, kEq, kGe };

struct LpConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::kLe;
  double rhs = 0.0;
};

// Dense LP in maximization form. Variable bounds default to [0, +inf);
// lower bounds must be non-negative.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<double> lower;  // empty means all zero
  std::vector<double> upper;  // empty means all +inf
  std::string trace_path;     // when set, dumps a pivot trace for debugging

  static constexpr double kInf = std::numeric_limits<double>::infinity();
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double value = 0.0;
};

// Two-phase dense tableau simplex with Bland's anti-cycling rule
// (smallest-index entering and leaving variable).
LpOutcome solve_lp(const LinearProgram& p);

}  // namespace mbb

#endif  // MBB_SIMPLEX_HPP_
