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

#ifndef MBB_MATROID_HPP_
#define MBB_MATROID_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mbb {

enum class MatroidKind { kUniform, kPartition, kGraphic, kExplicit };

// Bijection between two equal-size independent sets I1 and I2 such that
// I1 - i + sigma(i) stays independent for every i in I1, and sigma fixes
// the shared elements.
struct ExchangeBijection {
  // (source in I1, target in I2), sorted by source id.
  std::vector<std::pair<int, int>> pairs;

  int target_of(int source) const;
};

// Immutable matroid over ground elements 0..k-1 with an optional restriction
// to a subset of the ground set. All queries are pure and thread-safe.
class Matroid {
 public:
  static Matroid uniform(int k, int rank);
  // `blocks` must partition 0..k-1; one capacity per block.
  static Matroid partition(std::vector<std::vector<int>> blocks,
                           std::vector<int> capacities);
  // Elements are edges of a multigraph on vertices 0..n_vertices-1.
  static Matroid graphic(int n_vertices,
                         std::vector<std::pair<int, int>> edges);
  // Family listed as element sets. Hereditary and exchange axioms are
  // validated at construction for k <= 12 unless `validate` is false
  // (test fixtures only).
  static Matroid explicit_family(int k,
                                 const std::vector<std::vector<int>>& family,
                                 bool validate = true);
  // Same, with the family given as subset bitmasks.
  static Matroid explicit_masks(int k, std::vector<bool> independent,
                                bool validate = true);

  MatroidKind kind() const { return kind_; }
  // Size of the id space (elements outside a restriction keep their ids but
  // are not part of the ground set).
  int size() const { return k_; }
  bool in_ground(int e) const;
  std::vector<int> ground_set() const;
  int full_rank() const;

  bool is_independent(std::span<const int> s) const;
  int rank(std::span<const int> s) const;
  Matroid restricted(std::span<const int> r) const;

  // Greedy over `candidates` with per-element weights (indexed by id,
  // length k). Ties broken by ascending id; zero-weight elements are kept,
  // so the result is a basis of the restriction to `candidates`.
  std::vector<int> max_weight_independent_set(
      std::span<const int> candidates, std::span<const double> weights) const;

  ExchangeBijection exchange_bijection(std::span<const int> i1,
                                       std::span<const int> i2) const;

  // Incremental oracle used by the greedy: feed elements in the desired
  // order; try_add accepts the element iff the running set stays
  // independent. State is rebuilt per query.
  class BasisBuilder {
   public:
    bool try_add(int e);
    void reset();
    int count() const { return count_; }

   private:
    friend class Matroid;
    explicit BasisBuilder(const Matroid& m);

    const Matroid* m_;
    int count_ = 0;
    std::vector<int> dsu_parent_;     // graphic
    std::vector<int> block_counts_;   // partition
    std::uint32_t mask_ = 0;          // explicit
  };

  BasisBuilder builder() const { return BasisBuilder(*this); }

  // Empty uniform matroid; placeholder until a factory result is assigned.
  Matroid() = default;

 private:
  void check_element(int e) const;
  void check_set(std::span<const int> s, std::vector<int>* sorted_out) const;

  MatroidKind kind_ = MatroidKind::kUniform;
  int k_ = 0;
  int rank_cap_ = 0;                        // uniform
  std::vector<int> block_of_;               // partition
  std::vector<int> capacities_;             // partition
  int n_vertices_ = 0;                      // graphic
  std::vector<std::pair<int, int>> edges_;  // graphic
  std::vector<bool> independent_;           // explicit, mask-indexed
  std::optional<std::vector<bool>> ground_;
};

}  // namespace mbb

#endif  // MBB_MATROID_HPP_
