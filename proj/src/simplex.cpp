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

#include "mbb/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mbb/error.hpp"

namespace mbb {
namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-7;
constexpr int kSizeCap = 5000;

struct Row {
  std::vector<double> a;
  Relation rel;
  double rhs;
};

// Working tableau in standard form: structural columns first, then slack and
// surplus columns, then artificials. Column order is what makes Bland's rule
// well defined.
class Tableau {
 public:
  Tableau(std::vector<Row> rows, int n_struct, FILE* trace)
      : n_struct_(n_struct), trace_(trace) {
    const int m = static_cast<int>(rows.size());
    int n_slack = 0, n_art = 0;
    for (const Row& r : rows) {
      if (r.rel == Relation::kLe || r.rel == Relation::kGe) ++n_slack;
      if (r.rel == Relation::kGe || r.rel == Relation::kEq) ++n_art;
    }
    art_begin_ = n_struct_ + n_slack;
    cols_ = art_begin_ + n_art;
    basis_.resize(m);
    mat_.assign(m, std::vector<double>(cols_ + 1, 0.0));
    int slack = n_struct_, art = art_begin_;
    for (int i = 0; i < m; ++i) {
      std::copy(rows[i].a.begin(), rows[i].a.end(), mat_[i].begin());
      mat_[i][cols_] = rows[i].rhs;
      switch (rows[i].rel) {
        case Relation::kLe:
          mat_[i][slack] = 1.0;
          basis_[i] = slack++;
          break;
        case Relation::kGe:
          mat_[i][slack++] = -1.0;
          mat_[i][art] = 1.0;
          basis_[i] = art++;
          break;
        case Relation::kEq:
          mat_[i][art] = 1.0;
          basis_[i] = art++;
          break;
      }
    }
  }

  int rows() const { return static_cast<int>(mat_.size()); }
  int art_begin() const { return art_begin_; }
  double rhs(int i) const { return mat_[i][cols_]; }
  int basic_var(int i) const { return basis_[i]; }

  // Runs Bland-rule pivoting for the objective `c` (maximization, indexed
  // over all columns). Returns false when an unbounded ray is found.
  bool optimize(const std::vector<double>& c, bool allow_artificial_entering) {
    obj_.assign(cols_ + 1, 0.0);
    for (int j = 0; j < cols_; ++j) obj_[j] = -c[j];
    for (int i = 0; i < rows(); ++i) {
      if (c[basis_[i]] != 0.0) add_multiple(obj_, mat_[i], c[basis_[i]]);
    }
    int guard = 2000 + 200 * (rows() + cols_);
    for (;;) {
      const int enter_limit = allow_artificial_entering ? cols_ : art_begin_;
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j) {
        if (obj_[j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows(); ++i) {
        if (mat_[i][enter] <= kPivotEps) continue;
        const double ratio = mat_[i][cols_] / mat_[i][enter];
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (--guard < 0) {
        fail(ErrorCode::kInternal, "simplex iteration cap exceeded");
      }
    }
  }

  double objective_value() const { return obj_[cols_]; }

  // Pivots basic artificials out after phase 1; drops redundant rows.
  void eliminate_artificials() {
    for (int i = rows() - 1; i >= 0; --i) {
      if (basis_[i] < art_begin_) continue;
      int enter = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (std::fabs(mat_[i][j]) > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) {
        pivot(i, enter);
      } else {
        mat_.erase(mat_.begin() + i);
        basis_.erase(basis_.begin() + i);
      }
    }
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_struct_, 0.0);
    for (int i = 0; i < rows(); ++i) {
      if (basis_[i] < n_struct_) x[basis_[i]] = mat_[i][cols_];
    }
    return x;
  }

  int total_cols() const { return cols_; }

 private:
  static void add_multiple(std::vector<double>& dst,
                           const std::vector<double>& src, double factor) {
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += factor * src[j];
  }

  void pivot(int leave, int enter) {
    auto& prow = mat_[leave];
    const double inv = 1.0 / prow[enter];
    for (double& v : prow) v *= inv;
    prow[enter] = 1.0;
    for (int i = 0; i < rows(); ++i) {
      if (i == leave) continue;
      const double f = mat_[i][enter];
      if (f != 0.0) {
        add_multiple(mat_[i], prow, -f);
        mat_[i][enter] = 0.0;
      }
    }
    const double f = obj_[enter];
    if (f != 0.0) {
      add_multiple(obj_, prow, -f);
      obj_[enter] = 0.0;
    }
    basis_[leave] = enter;
    if (trace_ != nullptr) {
      std::fprintf(trace_, "pivot enter=%d leave_row=%d obj=%.12g\n", enter,
                   leave, obj_[cols_]);
    }
  }

  int n_struct_;
  int art_begin_ = 0;
  int cols_ = 0;
  std::vector<std::vector<double>> mat_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  FILE* trace_;
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& p) {
  const int n = static_cast<int>(p.objective.size());
  std::vector<double> lo = p.lower, hi = p.upper;
  if (lo.empty()) lo.assign(n, 0.0);
  if (hi.empty()) hi.assign(n, LinearProgram::kInf);
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n) {
    fail(ErrorCode::kInvalidArgument, "bound vectors must match variable count");
  }
  int finite_upper = 0;
  for (int j = 0; j < n; ++j) {
    if (lo[j] < 0.0) fail(ErrorCode::kInvalidArgument, "lower bounds must be non-negative");
    if (lo[j] > hi[j]) fail(ErrorCode::kInvalidArgument, "lower bound above upper bound");
    if (std::isfinite(hi[j])) ++finite_upper;
  }
  for (const LpConstraint& c : p.constraints) {
    if (static_cast<int>(c.coeffs.size()) != n) {
      fail(ErrorCode::kInvalidArgument, "constraint row length mismatch");
    }
  }
  const int m_total = static_cast<int>(p.constraints.size()) + finite_upper;
  if (n > kSizeCap || m_total > kSizeCap) {
    fail(ErrorCode::kTooLarge, "LP exceeds the dense solver size cap");
  }

  // Shift to x = lo + y with y >= 0; finite upper bounds become extra rows.
  std::vector<Row> rows;
  rows.reserve(m_total);
  for (const LpConstraint& c : p.constraints) {
    Row r{c.coeffs, c.relation,
          c.rhs - std::inner_product(c.coeffs.begin(), c.coeffs.end(),
                                     lo.begin(), 0.0)};
    rows.push_back(std::move(r));
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(hi[j])) continue;
    Row r;
    r.a.assign(n, 0.0);
    r.a[j] = 1.0;
    r.rel = Relation::kLe;
    r.rhs = hi[j] - lo[j];
    rows.push_back(std::move(r));
  }
  for (Row& r : rows) {
    if (r.rhs < 0.0) {
      for (double& v : r.a) v = -v;
      r.rhs = -r.rhs;
      if (r.rel == Relation::kLe) {
        r.rel = Relation::kGe;
      } else if (r.rel == Relation::kGe) {
        r.rel = Relation::kLe;
      }
    }
  }

  FILE* trace = nullptr;
  if (!p.trace_path.empty()) trace = std::fopen(p.trace_path.c_str(), "w");

  Tableau t(std::move(rows), n, trace);

  // Phase 1: maximize minus the sum of artificials.
  bool needs_phase1 = t.art_begin() < t.total_cols();
  if (needs_phase1) {
    std::vector<double> c1(t.total_cols(), 0.0);
    for (int j = t.art_begin(); j < t.total_cols(); ++j) c1[j] = -1.0;
    if (!t.optimize(c1, true)) {
      fail(ErrorCode::kInternal, "phase-1 objective cannot be unbounded");
    }
    if (t.objective_value() < -kFeasEps) {
      if (trace != nullptr) std::fclose(trace);
      return {LpStatus::kInfeasible, {}, 0.0};
    }
    t.eliminate_artificials();
  }

  std::vector<double> c2(t.total_cols(), 0.0);
  for (int j = 0; j < n; ++j) c2[j] = p.objective[j];
  const bool bounded = t.optimize(c2, false);
  if (trace != nullptr) std::fclose(trace);
  if (!bounded) return {LpStatus::kUnbounded, {}, 0.0};

  LpOutcome out;
  out.status = LpStatus::kOptimal;
  out.x = t.solution();
  for (int j = 0; j < n; ++j) out.x[j] += lo[j];
  out.value =
      std::inner_product(p.objective.begin(), p.objective.end(), out.x.begin(), 0.0);

  // Sanity check the certificate against the original constraints.
  for (const LpConstraint& c : p.constraints) {
    const double lhs =
        std::inner_product(c.coeffs.begin(), c.coeffs.end(), out.x.begin(), 0.0);
    const double scale = 1.0 + std::fabs(c.rhs);
    const bool ok = (c.relation == Relation::kLe && lhs <= c.rhs + kFeasEps * scale) ||
                    (c.relation == Relation::kGe && lhs >= c.rhs - kFeasEps * scale) ||
                    (c.relation == Relation::kEq && std::fabs(lhs - c.rhs) <= kFeasEps * scale);
    if (!ok) fail(ErrorCode::kInternal, "simplex produced an infeasible optimum");
  }
  return out;
}

}  // namespace mbb
