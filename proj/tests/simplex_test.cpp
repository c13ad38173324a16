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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "mbb/error.hpp"
#include "mbb/rng.hpp"
#include "mbb/simplex.hpp"
#include "support/oracles.hpp"

using mbb::LinearProgram;
using mbb::LpConstraint;
using mbb::LpOutcome;
using mbb::LpStatus;
using mbb::Relation;
using mbb::Rng;
using mbb::solve_lp;

TEST_CASE("box corner") {
  LinearProgram p;
  p.objective = {1.0, 1.0};
  p.constraints.push_back({{1.0, 0.0}, Relation::kLe, 1.0});
  p.constraints.push_back({{0.0, 1.0}, Relation::kLe, 1.0});
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.value == doctest::Approx(2.0));
  CHECK(out.x[0] == doctest::Approx(1.0));
  CHECK(out.x[1] == doctest::Approx(1.0));
}

TEST_CASE("infeasible") {
  LinearProgram p;
  p.objective = {1.0};
  p.constraints.push_back({{1.0}, Relation::kLe, -1.0});
  CHECK(solve_lp(p).status == LpStatus::kInfeasible);
}

TEST_CASE("unbounded") {
  LinearProgram p;
  p.objective = {1.0};
  CHECK(solve_lp(p).status == LpStatus::kUnbounded);
}

TEST_CASE("equality and lower bounds") {
  // max x + 2y with x + y = 3, y <= 2, x >= 1.
  LinearProgram p;
  p.objective = {1.0, 2.0};
  p.constraints.push_back({{1.0, 1.0}, Relation::kEq, 3.0});
  p.lower = {1.0, 0.0};
  p.upper = {LinearProgram::kInf, 2.0};
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.value == doctest::Approx(5.0));
  CHECK(out.x[0] == doctest::Approx(1.0));
  CHECK(out.x[1] == doctest::Approx(2.0));
}

TEST_CASE("greater-equal rows") {
  // max -x with x >= 2.
  LinearProgram p;
  p.objective = {-1.0};
  p.constraints.push_back({{1.0}, Relation::kGe, 2.0});
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.value == doctest::Approx(-2.0));
}

TEST_CASE("degenerate rows do not cycle") {
  LinearProgram p;
  p.objective = {1.0, 1.0, 1.0};
  p.constraints.push_back({{1.0, 1.0, 0.0}, Relation::kLe, 1.0});
  p.constraints.push_back({{1.0, 0.0, 1.0}, Relation::kLe, 1.0});
  p.constraints.push_back({{0.0, 1.0, 1.0}, Relation::kLe, 1.0});
  p.constraints.push_back({{1.0, 1.0, 1.0}, Relation::kLe, 1.5});
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.value == doctest::Approx(1.5));
}

TEST_CASE("dimension mismatch is rejected") {
  LinearProgram p;
  p.objective = {1.0, 1.0};
  p.constraints.push_back({{1.0}, Relation::kLe, 1.0});
  CHECK_THROWS_AS((void)solve_lp(p), mbb::Error);
  p.constraints.clear();
  p.lower = {0.0};
  CHECK_THROWS_AS((void)solve_lp(p), mbb::Error);
}

TEST_CASE("pivot trace lands in the requested file") {
  LinearProgram p;
  p.objective = {1.0, 1.0};
  p.constraints.push_back({{1.0, 2.0}, Relation::kLe, 4.0});
  p.constraints.push_back({{2.0, 1.0}, Relation::kLe, 4.0});
  p.trace_path = "simplex_trace_test.txt";
  const LpOutcome out = solve_lp(p);
  REQUIRE(out.status == LpStatus::kOptimal);
  std::FILE* trace = std::fopen(p.trace_path.c_str(), "r");
  REQUIRE(trace != nullptr);
  char line[128];
  CHECK(std::fgets(line, sizeof(line), trace) != nullptr);
  CHECK(std::string(line).rfind("pivot", 0) == 0);
  std::fclose(trace);
  std::remove(p.trace_path.c_str());
}

TEST_CASE("random bounded LPs equal basic-point enumeration") {
  Rng rng(0x51a93);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);   // <= 6 vars
    const int m = 1 + static_cast<int>(rng.next_u64() % 8);   // <= 8 rows
    mbb::test::DenseLp reference;
    reference.c.resize(n);
    reference.hi.resize(n);
    for (int j = 0; j < n; ++j) {
      reference.c[j] = 2.0 * rng.next_unit() - 1.0;
      reference.hi[j] = 0.5 + 2.5 * rng.next_unit();
    }
    LinearProgram p;
    p.objective = reference.c;
    p.upper = reference.hi;
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (double& v : row) v = 2.0 * rng.next_unit() - 1.0;
      const double rhs = 0.1 + 1.9 * rng.next_unit();  // origin stays feasible
      reference.a.push_back(row);
      reference.b.push_back(rhs);
      p.constraints.push_back({std::move(row), Relation::kLe, rhs});
    }
    const LpOutcome out = solve_lp(p);
    REQUIRE(out.status == LpStatus::kOptimal);
    const double expected = mbb::test::enumerate_lp_max(reference);
    CHECK(out.value == doctest::Approx(expected).epsilon(1e-6));

    // Certificate feasibility.
    for (int i = 0; i < m; ++i) {
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += reference.a[i][j] * out.x[j];
      CHECK(dot <= reference.b[i] + 1e-8);
    }
    for (int j = 0; j < n; ++j) {
      CHECK(out.x[j] >= -1e-8);
      CHECK(out.x[j] <= reference.hi[j] + 1e-8);
    }
  }
}
