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

// Exercises the shared library the way an external consumer would: through
// the C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "mbb/mbb.h"

namespace fs = std::filesystem;

TEST_CASE("version and error text") {
  CHECK(mbb_version() != nullptr);
  CHECK(std::strlen(mbb_last_error()) == 0);
  mbb_matroid* m = nullptr;
  CHECK(mbb_matroid_uniform(2, 5, &m) == MBB_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(mbb_last_error()) > 0);
}

TEST_CASE("matroid handles") {
  mbb_matroid* u = nullptr;
  REQUIRE(mbb_matroid_uniform(5, 2, &u) == MBB_OK);
  const int32_t pair[] = {0, 1};
  const int32_t triple[] = {0, 1, 2};
  int32_t flag = -1;
  CHECK(mbb_matroid_is_independent(u, pair, 2, &flag) == MBB_OK);
  CHECK(flag == 1);
  CHECK(mbb_matroid_is_independent(u, triple, 3, &flag) == MBB_OK);
  CHECK(flag == 0);

  int32_t rank = -1;
  const int32_t all[] = {0, 1, 2, 3};
  CHECK(mbb_matroid_rank(u, all, 4, &rank) == MBB_OK);
  CHECK(rank == 2);

  const int32_t bad[] = {9};
  CHECK(mbb_matroid_is_independent(u, bad, 1, &flag) == MBB_ERR_OUT_OF_RANGE);

  mbb_matroid* restricted = nullptr;
  REQUIRE(mbb_matroid_restrict(u, pair, 2, &restricted) == MBB_OK);
  const int32_t outside[] = {3};
  CHECK(mbb_matroid_rank(restricted, outside, 1, &rank) == MBB_ERR_OUT_OF_RANGE);
  mbb_matroid_free(restricted);

  const double weights[] = {0.2, 0.9, 0.5, 0.1, 0.0};
  int32_t basis[8];
  int32_t basis_size = 0;
  const int32_t candidates[] = {0, 1, 2, 3, 4};
  CHECK(mbb_matroid_max_weight_basis(u, candidates, 5, weights, basis, 8,
                                     &basis_size) == MBB_OK);
  REQUIRE(basis_size == 2);
  CHECK(basis[0] == 1);
  CHECK(basis[1] == 2);
  mbb_matroid_free(u);

  // Partition kind and graphic kind.
  const int32_t block_of[] = {0, 0, 1};
  const int32_t caps[] = {1, 1};
  mbb_matroid* p = nullptr;
  REQUIRE(mbb_matroid_partition(3, block_of, caps, 2, &p) == MBB_OK);
  CHECK(mbb_matroid_is_independent(p, pair, 2, &flag) == MBB_OK);
  CHECK(flag == 0);
  mbb_matroid_free(p);

  const int32_t endpoints[] = {0, 1, 1, 2, 2, 0};
  mbb_matroid* g = nullptr;
  REQUIRE(mbb_matroid_graphic(3, endpoints, 3, &g) == MBB_OK);
  CHECK(mbb_matroid_is_independent(g, triple, 3, &flag) == MBB_OK);
  CHECK(flag == 0);
  mbb_matroid_free(g);

  const uint32_t family[] = {0u, 1u, 2u, 4u};
  mbb_matroid* e = nullptr;
  REQUIRE(mbb_matroid_explicit(3, family, 4, 1, &e) == MBB_OK);
  const int32_t zero_two[] = {0, 2};
  CHECK(mbb_matroid_is_independent(e, zero_two, 2, &flag) == MBB_OK);
  CHECK(flag == 0);
  mbb_matroid_free(e);
}

TEST_CASE("submodular handles") {
  mbb_submodular* budget = nullptr;
  REQUIRE(mbb_submodular_budget_additive(3, 1, &budget) == MBB_OK);
  const int32_t all[] = {0, 1, 2};
  double value = 0.0;
  CHECK(mbb_submodular_eval(budget, all, 3, &value) == MBB_OK);
  CHECK(value == 1.0);
  mbb_submodular_free(budget);

  const double table[] = {0.0, 2.0, 2.0, 3.0};
  mbb_submodular* pair = nullptr;
  REQUIRE(mbb_submodular_explicit(2, table, &pair) == MBB_OK);
  const double half[] = {0.5, 0.5};
  CHECK(mbb_submodular_multilinear(pair, half, &value) == MBB_OK);
  CHECK(value == doctest::Approx(1.75));
  CHECK(mbb_submodular_concave_closure(pair, half, &value) == MBB_OK);
  CHECK(value == doctest::Approx(2.0).epsilon(1e-9));
  mbb_submodular_free(pair);

  mbb_matroid* u = nullptr;
  REQUIRE(mbb_matroid_uniform(2, 1, &u) == MBB_OK);
  const double weights[] = {0.4, 0.9};
  mbb_submodular* rank = nullptr;
  REQUIRE(mbb_submodular_weighted_rank(u, weights, &rank) == MBB_OK);
  const int32_t both[] = {0, 1};
  CHECK(mbb_submodular_eval(rank, both, 2, &value) == MBB_OK);
  CHECK(value == doctest::Approx(0.9));
  mbb_submodular_free(rank);
  mbb_matroid_free(u);
}

TEST_CASE("schedule membership and audit") {
  int32_t hit = -1;
  CHECK(mbb_schedule_contains_integer(0, 2, 0, &hit) == MBB_OK);
  CHECK(hit == 1);
  CHECK(mbb_schedule_contains_integer(0, 2, 1, &hit) == MBB_OK);
  CHECK(hit == 0);
  CHECK(mbb_schedule_contains_integer(0, 0, 0, &hit) == MBB_ERR_INVALID_ARGUMENT);

  const int32_t delays[] = {1, 3};
  char* csv = nullptr;
  REQUIRE(mbb_check_schedule(delays, 2, 9, 6, &csv) == MBB_OK);
  CHECK(std::string(csv).rfind("t,selected\n", 0) == 0);
  mbb_string_free(csv);
}

TEST_CASE("experiment entry points") {
  const fs::path dir = fs::temp_directory_path() / "mbb_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "config.json";
  {
    std::ofstream out(config);
    out << R"({
      "experiment": "capi",
      "instance": {
        "means": [1.0, 0.6],
        "delays": [2, 2],
        "laws": "deterministic",
        "matroid": {"kind": "uniform", "rank": 1}
      },
      "policies": ["ig", "ib"],
      "rounds": 25,
      "replications": 2,
      "seed": 5
    })";
  }

  char* summary = nullptr;
  const std::string out_dir = (dir / "out").string();
  REQUIRE(mbb_run_experiment(config.string().c_str(), out_dir.c_str(), nullptr,
                             nullptr, &summary) == MBB_OK);
  CHECK(std::string(summary).find("\"offsets_coupled\": true") != std::string::npos);
  mbb_string_free(summary);
  CHECK(fs::exists(dir / "out" / "rows.csv"));
  CHECK(fs::exists(dir / "out" / "summary.json"));

  char* bounds = nullptr;
  const std::string bounds_dir = (dir / "bounds").string();
  REQUIRE(mbb_bounds(config.string().c_str(), bounds_dir.c_str(), &bounds) ==
          MBB_OK);
  CHECK(std::string(bounds).find("\"lp_value\"") != std::string::npos);
  mbb_string_free(bounds);
  CHECK(fs::exists(dir / "bounds" / "bounds.csv"));

  CHECK(mbb_run_experiment((dir / "missing.json").string().c_str(), nullptr,
                           nullptr, nullptr, nullptr) == MBB_ERR_IO);

  char* overridden = nullptr;
  const std::string out2 = (dir / "out2").string();
  REQUIRE(mbb_run_experiment(config.string().c_str(), out2.c_str(), nullptr,
                             "greedy", &overridden) == MBB_OK);
  CHECK(std::string(overridden).find("\"policy\": \"greedy\"") !=
        std::string::npos);
  mbb_string_free(overridden);
  CHECK(mbb_run_experiment(config.string().c_str(), out2.c_str(), nullptr,
                           "zz", nullptr) == MBB_ERR_CONFIG);

  char* report = nullptr;
  REQUIRE(mbb_reproduce("cp_remark", &report) == MBB_OK);
  CHECK(std::string(report).find("\"pass\": true") != std::string::npos);
  mbb_string_free(report);
  CHECK(mbb_reproduce("nope", nullptr) == MBB_ERR_UNKNOWN_NAME);

  fs::remove_all(dir);
}
