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

#include "mbb/matroid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mbb/error.hpp"

namespace mbb {
namespace {

constexpr int kExplicitSizeCap = 20;      // bitmask representation
constexpr int kExplicitValidateCap = 12;  // exhaustive axiom check

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

// Hereditary + one-step exchange over the mask-indexed family. The one-step
// form implies the general augmentation axiom by induction.
void validate_explicit_axioms(int k, const std::vector<bool>& indep) {
  if (!indep[0]) fail(ErrorCode::kInvalidArgument, "explicit matroid: empty set must be independent");
  const std::uint32_t full = (k >= 32) ? 0xffffffffu : ((1u << k) - 1u);
  std::vector<std::vector<std::uint32_t>> by_size(k + 1);
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (!indep[m]) continue;
    for (int b = 0; b < k; ++b) {
      const std::uint32_t bit = 1u << b;
      if ((m & bit) && !indep[m ^ bit]) {
        fail(ErrorCode::kInvalidArgument, "explicit matroid: family is not hereditary");
      }
    }
    by_size[std::popcount(m)].push_back(m);
  }
  for (int s = 0; s + 1 <= k; ++s) {
    for (std::uint32_t small : by_size[s]) {
      for (std::uint32_t big : by_size[s + 1]) {
        std::uint32_t extra = big & ~small;
        bool ok = false;
        while (extra != 0) {
          const std::uint32_t bit = extra & (~extra + 1u);
          if (indep[small | bit]) {
            ok = true;
            break;
          }
          extra ^= bit;
        }
        if (!ok) fail(ErrorCode::kInvalidArgument, "explicit matroid: exchange axiom fails");
      }
    }
  }
}

}  // namespace

int ExchangeBijection::target_of(int source) const {
  for (const auto& [from, to] : pairs) {
    if (from == source) return to;
  }
  fail(ErrorCode::kInvalidArgument, "element not in bijection domain");
}

Matroid Matroid::uniform(int k, int rank) {
  if (k < 0 || rank < 0 || rank > k) {
    fail(ErrorCode::kInvalidArgument, "uniform matroid requires 0 <= rank <= k");
  }
  Matroid m;
  m.kind_ = MatroidKind::kUniform;
  m.k_ = k;
  m.rank_cap_ = rank;
  return m;
}

Matroid Matroid::partition(std::vector<std::vector<int>> blocks,
                           std::vector<int> capacities) {
  if (blocks.size() != capacities.size()) {
    fail(ErrorCode::kInvalidArgument, "one capacity per block required");
  }
  int k = 0;
  for (const auto& b : blocks) k += static_cast<int>(b.size());
  Matroid m;
  m.kind_ = MatroidKind::kPartition;
  m.k_ = k;
  m.block_of_.assign(k, -1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (capacities[i] < 0) fail(ErrorCode::kInvalidArgument, "negative block capacity");
    for (int e : blocks[i]) {
      if (e < 0 || e >= k || m.block_of_[e] != -1) {
        fail(ErrorCode::kInvalidArgument, "blocks must partition the ground set");
      }
      m.block_of_[e] = static_cast<int>(i);
    }
  }
  m.capacities_ = std::move(capacities);
  return m;
}

Matroid Matroid::graphic(int n_vertices, std::vector<std::pair<int, int>> edges) {
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices) {
      fail(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
  }
  Matroid m;
  m.kind_ = MatroidKind::kGraphic;
  m.k_ = static_cast<int>(edges.size());
  m.n_vertices_ = n_vertices;
  m.edges_ = std::move(edges);
  return m;
}

Matroid Matroid::explicit_masks(int k, std::vector<bool> independent,
                                bool validate) {
  if (k < 0 || k > kExplicitSizeCap) {
    fail(ErrorCode::kTooLarge, "explicit matroid limited to " +
                                   std::to_string(kExplicitSizeCap) + " elements");
  }
  if (independent.size() != (std::size_t{1} << k)) {
    fail(ErrorCode::kInvalidArgument, "family table must have 2^k entries");
  }
  if (validate && k <= kExplicitValidateCap) {
    validate_explicit_axioms(k, independent);
  }
  Matroid m;
  m.kind_ = MatroidKind::kExplicit;
  m.k_ = k;
  m.independent_ = std::move(independent);
  return m;
}

Matroid Matroid::explicit_family(int k,
                                 const std::vector<std::vector<int>>& family,
                                 bool validate) {
  if (k < 0 || k > kExplicitSizeCap) {
    fail(ErrorCode::kTooLarge, "explicit matroid limited to " +
                                   std::to_string(kExplicitSizeCap) + " elements");
  }
  std::vector<bool> table(std::size_t{1} << k, false);
  for (const auto& s : family) {
    std::uint32_t mask = 0;
    for (int e : s) {
      if (e < 0 || e >= k) fail(ErrorCode::kOutOfRange, "family element out of range");
      mask |= 1u << e;
    }
    table[mask] = true;
  }
  return explicit_masks(k, std::move(table), validate);
}

bool Matroid::in_ground(int e) const {
  if (e < 0 || e >= k_) return false;
  return !ground_ || (*ground_)[e];
}

std::vector<int> Matroid::ground_set() const {
  std::vector<int> out;
  for (int e = 0; e < k_; ++e) {
    if (in_ground(e)) out.push_back(e);
  }
  return out;
}

int Matroid::full_rank() const {
  const std::vector<int> g = ground_set();
  return rank(g);
}

void Matroid::check_element(int e) const {
  if (e < 0 || e >= k_) {
    fail(ErrorCode::kOutOfRange, "element id " + std::to_string(e) + " out of range");
  }
  if (!in_ground(e)) {
    fail(ErrorCode::kOutOfRange, "element id " + std::to_string(e) + " outside ground set");
  }
}

void Matroid::check_set(std::span<const int> s, std::vector<int>* sorted_out) const {
  std::vector<int> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    check_element(sorted[i]);
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      fail(ErrorCode::kInvalidArgument, "duplicate element in set");
    }
  }
  if (sorted_out != nullptr) *sorted_out = std::move(sorted);
}

Matroid::BasisBuilder::BasisBuilder(const Matroid& m) : m_(&m) {
  switch (m.kind_) {
    case MatroidKind::kGraphic:
      dsu_parent_.resize(m.n_vertices_);
      break;
    case MatroidKind::kPartition:
      block_counts_.resize(m.capacities_.size());
      break;
    default:
      break;
  }
  reset();
}

void Matroid::BasisBuilder::reset() {
  count_ = 0;
  mask_ = 0;
  for (std::size_t v = 0; v < dsu_parent_.size(); ++v) {
    dsu_parent_[v] = static_cast<int>(v);
  }
  std::fill(block_counts_.begin(), block_counts_.end(), 0);
}

bool Matroid::BasisBuilder::try_add(int e) {
  m_->check_element(e);
  switch (m_->kind_) {
    case MatroidKind::kUniform:
      if (count_ >= m_->rank_cap_) return false;
      break;
    case MatroidKind::kPartition: {
      const int b = m_->block_of_[e];
      if (block_counts_[b] >= m_->capacities_[b]) return false;
      ++block_counts_[b];
      break;
    }
    case MatroidKind::kGraphic: {
      const auto& [u, v] = m_->edges_[e];
      const int ru = find_root(dsu_parent_, u);
      const int rv = find_root(dsu_parent_, v);
      if (ru == rv) return false;
      dsu_parent_[ru] = rv;
      break;
    }
    case MatroidKind::kExplicit: {
      const std::uint32_t next = mask_ | (1u << e);
      if (!m_->independent_[next]) return false;
      mask_ = next;
      break;
    }
  }
  ++count_;
  return true;
}

bool Matroid::is_independent(std::span<const int> s) const {
  std::vector<int> sorted;
  check_set(s, &sorted);
  BasisBuilder b(*this);
  for (int e : sorted) {
    if (!b.try_add(e)) return false;
  }
  return true;
}

int Matroid::rank(std::span<const int> s) const {
  std::vector<int> sorted;
  check_set(s, &sorted);
  BasisBuilder b(*this);
  for (int e : sorted) b.try_add(e);
  return b.count();
}

Matroid Matroid::restricted(std::span<const int> r) const {
  std::vector<int> sorted;
  check_set(r, &sorted);
  Matroid out = *this;
  std::vector<bool> ground(k_, false);
  for (int e : sorted) ground[e] = true;
  out.ground_ = std::move(ground);
  return out;
}

std::vector<int> Matroid::max_weight_independent_set(
    std::span<const int> candidates, std::span<const double> weights) const {
  std::vector<int> sorted;
  check_set(candidates, &sorted);
  if (weights.size() != static_cast<std::size_t>(k_)) {
    fail(ErrorCode::kInvalidArgument, "weight vector must cover the ground set");
  }
  for (int e : sorted) {
    if (std::isnan(weights[e]) || weights[e] < 0.0) {
      fail(ErrorCode::kInvalidArgument, "negative weight on candidate element");
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });
  BasisBuilder builder(*this);
  std::vector<int> out;
  for (int e : sorted) {
    if (builder.try_add(e)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExchangeBijection Matroid::exchange_bijection(std::span<const int> i1,
                                              std::span<const int> i2) const {
  std::vector<int> a, b;
  check_set(i1, &a);
  check_set(i2, &b);
  if (a.size() != b.size()) {
    fail(ErrorCode::kInvalidArgument, "exchange bijection requires equal-size sets");
  }
  if (!is_independent(a) || !is_independent(b)) {
    fail(ErrorCode::kInvalidArgument, "exchange bijection requires independent sets");
  }

  ExchangeBijection out;
  std::vector<int> left, right;  // i1 \ i2 and i2 \ i1
  for (int e : a) {
    if (std::binary_search(b.begin(), b.end(), e)) {
      out.pairs.emplace_back(e, e);  // shared elements are fixed points
    } else {
      left.push_back(e);
    }
  }
  for (int e : b) {
    if (!std::binary_search(a.begin(), a.end(), e)) right.push_back(e);
  }

  // Bipartite edges: (i, j) with I1 - i + j independent; perfect matching by
  // augmenting paths. Existence is guaranteed by the exchange property, so a
  // failed matching means a broken independence oracle.
  const int n = static_cast<int>(left.size());
  std::vector<std::vector<int>> adj(n);
  std::vector<int> probe;
  for (int i = 0; i < n; ++i) {
    probe = a;
    probe.erase(std::find(probe.begin(), probe.end(), left[i]));
    for (int j = 0; j < n; ++j) {
      probe.push_back(right[j]);
      if (is_independent(probe)) adj[i].push_back(j);
      probe.pop_back();
    }
  }
  std::vector<int> match_right(n, -1), match_left(n, -1);
  std::vector<char> seen(n, 0);
  auto augment = [&](auto&& self, int u) -> bool {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || self(self, match_right[v])) {
        match_right[v] = u;
        match_left[u] = v;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < n; ++u) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, u)) {
      fail(ErrorCode::kInternal,
           "exchange matching failed: independence oracle violates the exchange property");
    }
  }
  for (int u = 0; u < n; ++u) {
    out.pairs.emplace_back(left[u], right[match_left[u]]);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace mbb
