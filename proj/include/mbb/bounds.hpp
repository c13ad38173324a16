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

#ifndef MBB_BOUNDS_HPP_
#define MBB_BOUNDS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mbb/env.hpp"
#include "mbb/matroid.hpp"
#include "mbb/submodular.hpp"

namespace mbb {

// Exact optimal expected cumulative reward over `horizon` rounds, by value
// iteration over remaining-block vectors. Requires the product of the delays
// to be at most 10^6 and horizon at most 10^4.
double dp_optimal(const BlockingInstance& inst, long horizon);

// LP upper bound from the matroid polytope intersected with the per-arm
// frequency box, scaled by the horizon. Enumerates every nonempty rank
// constraint, so the ground set is capped at 16 elements (and the dense
// solver caps the usable range at 12).
double lp_upper_bound(const BlockingInstance& inst, long horizon);

// Upper bound based on the concave closure evaluated at the frequency
// vector 1/d, scaled by the horizon (k <= 12). A small random perturbation
// audit guards the coordinate-wise monotonicity this relies on.
double cp_upper_bound(const SubmodularFn& f, const Delays& delays,
                      long horizon);

// Pairwise suboptimality gaps in decreasing-mean order, the per-pair sample
// thresholds floor(8 ln(T) / gap^2), and the gap-dependent regret bound
// 16 ln(T) * sum_j 1/gap_{j-1,j} + (pi^2/3) * sum_{i<j} gap_{i,j}.
struct GapTable {
  std::vector<int> order;           // arm ids, decreasing mean
  std::vector<double> sorted_means;
  std::vector<std::vector<double>> gap;        // gap[i][j], sorted indices
  std::vector<std::vector<long>> threshold;    // defined for i < j
  double log_horizon = 0.0;
  double gap_dependent_bound = 0.0;

  int arms() const { return static_cast<int>(order.size()); }
};

GapTable compute_gap_table(std::span<const double> means, long horizon);

// Decomposes the mean-value difference between two equal-size independent
// sets along an exchange bijection; the total equals the difference exactly.
struct GapDecomposition {
  ExchangeBijection bijection;  // maps the second set onto the first
  // (element of first set, matched element of second set, mean gap).
  std::vector<std::tuple<int, int, double>> pair_gaps;
  double total = 0.0;
};

GapDecomposition gap_decomposition(const Matroid& m,
                                   std::span<const int> first_set,
                                   std::span<const int> second_set,
                                   std::span<const double> means);

// Tiles the best contiguous window of length `period` over the horizon.
// All delays must equal the period; the result is feasible with average
// value at least the input's.
std::vector<std::vector<int>> periodize(
    const std::vector<std::vector<int>>& schedule, int period,
    const Delays& delays,
    const std::function<double(std::span<const int>)>& value);

// Certificate values for one instance and horizon. Bounds that exceed their
// size caps are left unset.
struct BoundReport {
  long horizon = 0;
  std::optional<double> dp_value;
  std::optional<double> lp_value;
  std::optional<double> cp_value;
  int d_max = 1;
  int matroid_rank = 0;
  double full_set_value = 0.0;  // f(A) of the weighted-rank objective
  std::optional<GapTable> gaps;

  static double rate(const std::optional<double>& v, long horizon) {
    return v ? *v / static_cast<double>(horizon) : 0.0;
  }
};

BoundReport compute_bounds(const BlockingInstance& inst, long horizon,
                           const std::optional<SubmodularFn>& objective);

}  // namespace mbb

#endif  // MBB_BOUNDS_HPP_
