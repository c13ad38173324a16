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

#include "mbb/submodular.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mbb/error.hpp"
#include "mbb/simplex.hpp"

namespace mbb {
namespace {

constexpr int kEnumerationCap = 20;  // 2^k table enumeration
constexpr int kClosureCap = 12;      // LP with 2^k variables
constexpr double kAxiomEps = 1e-12;

void validate_table_axioms(int k, const std::vector<double>& f) {
  if (f[0] != 0.0) fail(ErrorCode::kInvalidArgument, "explicit function must have f(empty) = 0");
  const std::uint32_t full = (1u << k) - 1u;
  for (std::uint32_t m = 0; m <= full; ++m) {
    for (int i = 0; i < k; ++i) {
      const std::uint32_t bi = 1u << i;
      if (m & bi) continue;
      if (f[m | bi] < f[m] - kAxiomEps) {
        fail(ErrorCode::kInvalidArgument, "explicit function is not monotone");
      }
      // Marginal of i must not grow when j is added first.
      for (int j = 0; j < k; ++j) {
        const std::uint32_t bj = 1u << j;
        if (i == j || (m & bj)) continue;
        const double before = f[m | bi] - f[m];
        const double after = f[m | bi | bj] - f[m | bj];
        if (after > before + kAxiomEps) {
          fail(ErrorCode::kInvalidArgument, "explicit function is not submodular");
        }
      }
    }
  }
}

}  // namespace

SubmodularFn SubmodularFn::weighted_rank(Matroid m, std::vector<double> weights) {
  if (static_cast<int>(weights.size()) != m.size()) {
    fail(ErrorCode::kInvalidArgument, "one weight per ground element required");
  }
  for (double w : weights) {
    if (std::isnan(w) || w < 0.0) {
      fail(ErrorCode::kInvalidArgument, "weighted rank requires non-negative weights");
    }
  }
  SubmodularFn f;
  f.kind_ = SubmodularKind::kWeightedRank;
  f.k_ = m.size();
  f.matroid_ = std::move(m);
  f.weights_ = std::move(weights);
  return f;
}

SubmodularFn SubmodularFn::coverage(int k, std::vector<std::vector<int>> covers,
                                    std::vector<double> item_weights) {
  if (static_cast<int>(covers.size()) != k) {
    fail(ErrorCode::kInvalidArgument, "one covered-item list per element required");
  }
  for (const auto& items : covers) {
    for (int item : items) {
      if (item < 0 || item >= static_cast<int>(item_weights.size())) {
        fail(ErrorCode::kOutOfRange, "covered item id out of range");
      }
    }
  }
  for (double w : item_weights) {
    if (std::isnan(w) || w < 0.0) {
      fail(ErrorCode::kInvalidArgument, "item weights must be non-negative");
    }
  }
  SubmodularFn f;
  f.kind_ = SubmodularKind::kCoverage;
  f.k_ = k;
  f.covers_ = std::move(covers);
  f.item_weights_ = std::move(item_weights);
  return f;
}

SubmodularFn SubmodularFn::budget_additive(int k, int budget) {
  if (k < 0 || budget < 0) {
    fail(ErrorCode::kInvalidArgument, "budget-additive requires k >= 0 and budget >= 0");
  }
  SubmodularFn f;
  f.kind_ = SubmodularKind::kBudgetAdditive;
  f.k_ = k;
  f.budget_ = budget;
  return f;
}

SubmodularFn SubmodularFn::explicit_table(int k, std::vector<double> table,
                                          bool validate) {
  if (k < 0 || k > kEnumerationCap) {
    fail(ErrorCode::kTooLarge, "explicit table limited to 2^20 entries");
  }
  if (table.size() != (std::size_t{1} << k)) {
    fail(ErrorCode::kInvalidArgument, "table must have 2^k entries");
  }
  if (validate && k <= kClosureCap) validate_table_axioms(k, table);
  SubmodularFn f;
  f.kind_ = SubmodularKind::kExplicit;
  f.k_ = k;
  f.table_ = std::move(table);
  return f;
}

SubmodularFn SubmodularFn::explicit_from_file(const std::string& path,
                                              bool validate) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open table file: " + path);
  std::uint32_t max_mask = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t mask;
    double value;
    if (!(ls >> mask >> value)) {
      fail(ErrorCode::kConfig, "bad table line: " + line);
    }
    entries.emplace_back(static_cast<std::uint32_t>(mask), value);
    max_mask = std::max(max_mask, static_cast<std::uint32_t>(mask));
  }
  int k = 0;
  while ((1u << k) <= max_mask) ++k;
  std::vector<double> table(std::size_t{1} << k, 0.0);
  for (const auto& [mask, value] : entries) table[mask] = value;
  return explicit_table(k, std::move(table), validate);
}

double SubmodularFn::eval_mask(std::uint32_t mask) const {
  if (k_ < 32 && mask >= (1u << k_)) fail(ErrorCode::kOutOfRange, "subset mask out of range");
  switch (kind_) {
    case SubmodularKind::kExplicit:
      return table_[mask];
    case SubmodularKind::kBudgetAdditive: {
      const int size = __builtin_popcount(mask);
      return static_cast<double>(std::min(size, budget_));
    }
    case SubmodularKind::kCoverage: {
      double total = 0.0;
      std::vector<bool> covered(item_weights_.size(), false);
      for (int e = 0; e < k_; ++e) {
        if (!(mask & (1u << e))) continue;
        for (int item : covers_[e]) {
          if (!covered[item]) {
            covered[item] = true;
            total += item_weights_[item];
          }
        }
      }
      return total;
    }
    case SubmodularKind::kWeightedRank: {
      std::vector<int> s;
      for (int e = 0; e < k_; ++e) {
        if (mask & (1u << e)) s.push_back(e);
      }
      double total = 0.0;
      for (int e : matroid_.max_weight_independent_set(s, weights_)) {
        total += weights_[e];
      }
      return total;
    }
  }
  fail(ErrorCode::kInternal, "unreachable submodular kind");
}

double SubmodularFn::eval(std::span<const int> s) const {
  std::uint32_t mask = 0;
  for (int e : s) {
    if (e < 0 || e >= k_) fail(ErrorCode::kOutOfRange, "element id out of range");
    mask |= 1u << e;
  }
  return eval_mask(mask);
}

void SubmodularFn::check_marginals(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(k_)) {
    fail(ErrorCode::kInvalidArgument, "marginal vector length mismatch");
  }
  for (double v : x) {
    if (std::isnan(v) || v < 0.0 || v > 1.0) {
      fail(ErrorCode::kInvalidArgument, "marginals must lie in [0, 1]");
    }
  }
}

std::vector<double> SubmodularFn::dense_table() const {
  const std::size_t n = std::size_t{1} << k_;
  std::vector<double> table(n);
  for (std::size_t m = 0; m < n; ++m) {
    table[m] = eval_mask(static_cast<std::uint32_t>(m));
  }
  return table;
}

double SubmodularFn::multilinear_exact(std::span<const double> x) const {
  check_marginals(x);
  if (k_ > kEnumerationCap) {
    fail(ErrorCode::kTooLarge, "ground set too large for exact enumeration");
  }
  const std::size_t n = std::size_t{1} << k_;
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double prob = 1.0;
    for (int e = 0; e < k_; ++e) {
      prob *= (m & (std::size_t{1} << e)) ? x[e] : 1.0 - x[e];
    }
    if (prob != 0.0) total += prob * eval_mask(static_cast<std::uint32_t>(m));
  }
  return total;
}

MonteCarloEstimate SubmodularFn::multilinear_mc(std::span<const double> x,
                                                long samples, Rng& rng) const {
  check_marginals(x);
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "at least one sample required");
  double sum = 0.0, sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    std::uint32_t mask = 0;
    for (int e = 0; e < k_; ++e) {
      if (rng.next_unit() < x[e]) mask |= 1u << e;
    }
    const double v = eval_mask(mask);
    sum += v;
    sum_sq += v * v;
  }
  MonteCarloEstimate out;
  out.estimate = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(samples)) /
                          static_cast<double>(samples - 1));
    out.std_error = std::sqrt(var / static_cast<double>(samples));
  }
  return out;
}

double SubmodularFn::concave_closure(std::span<const double> x) const {
  check_marginals(x);
  if (k_ > kClosureCap) {
    fail(ErrorCode::kTooLarge, "ground set too large for the closure LP");
  }
  const std::size_t n = std::size_t{1} << k_;
  LinearProgram lp;
  lp.objective = dense_table();
  // One marginal constraint per element plus the total-mass constraint.
  for (int e = 0; e < k_; ++e) {
    LpConstraint c;
    c.coeffs.assign(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      if (m & (std::size_t{1} << e)) c.coeffs[m] = 1.0;
    }
    c.relation = Relation::kEq;
    c.rhs = x[e];
    lp.constraints.push_back(std::move(c));
  }
  LpConstraint mass;
  mass.coeffs.assign(n, 1.0);
  mass.relation = Relation::kEq;
  mass.rhs = 1.0;
  lp.constraints.push_back(std::move(mass));

  const LpOutcome out = solve_lp(lp);
  if (out.status != LpStatus::kOptimal) {
    // The independent product distribution is always feasible.
    fail(ErrorCode::kInternal, "closure LP unexpectedly unsolved");
  }
  return out.value;
}

}  // namespace mbb
