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

#ifndef MBB_SUBMODULAR_HPP_
#define MBB_SUBMODULAR_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mbb/matroid.hpp"
#include "mbb/rng.hpp"

namespace mbb {

enum class SubmodularKind { kWeightedRank, kCoverage, kBudgetAdditive, kExplicit };

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monotone submodular set-function oracle over elements 0..k-1.
// Immutable; all evaluations are pure.
class SubmodularFn {
 public:
  // f(S) = weight of the max-weight independent subset of S.
  static SubmodularFn weighted_rank(Matroid m, std::vector<double> weights);
  // f(S) = total weight of items covered by the elements of S.
  static SubmodularFn coverage(int k, std::vector<std::vector<int>> covers,
                               std::vector<double> item_weights);
  // f(S) = min(|S|, budget).
  static SubmodularFn budget_additive(int k, int budget);
  // Value table indexed by subset bitmask; f(0) = 0, monotonicity and
  // submodularity are validated for k <= 12 unless `validate` is false.
  static SubmodularFn explicit_table(int k, std::vector<double> table,
                                     bool validate = true);
  // Loads an explicit table from a text file of "bitmask value" lines.
  static SubmodularFn explicit_from_file(const std::string& path,
                                         bool validate = true);

  SubmodularKind kind() const { return kind_; }
  int size() const { return k_; }

  double eval(std::span<const int> s) const;
  double eval_mask(std::uint32_t mask) const;

  // Exact multilinear extension by 2^k enumeration (k <= 20).
  double multilinear_exact(std::span<const double> x) const;

  // Unbiased Monte Carlo estimate of the multilinear extension.
  MonteCarloEstimate multilinear_mc(std::span<const double> x, long samples,
                                    Rng& rng) const;

  // Concave closure, solved exactly as an LP with 2^k distribution weights
  // (k <= 12).
  double concave_closure(std::span<const double> x) const;

 private:
  SubmodularFn() = default;

  void check_marginals(std::span<const double> x) const;
  std::vector<double> dense_table() const;

  SubmodularKind kind_ = SubmodularKind::kBudgetAdditive;
  int k_ = 0;
  Matroid matroid_;                       // weighted rank
  std::vector<double> weights_;           // weighted rank
  std::vector<std::vector<int>> covers_;  // coverage: element -> item ids
  std::vector<double> item_weights_;      // coverage
  int budget_ = 0;                        // budget additive
  std::vector<double> table_;             // explicit
};

}  // namespace mbb

#endif  // MBB_SUBMODULAR_HPP_
