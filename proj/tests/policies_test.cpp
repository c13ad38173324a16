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
#include <limits>
#include <vector>

#include "doctest.h"
#include "mbb/env.hpp"
#include "mbb/error.hpp"
#include "mbb/experiment.hpp"
#include "mbb/policies.hpp"
#include "mbb/submodular.hpp"
#include "support/oracles.hpp"

using namespace mbb;
namespace test = mbb::test;

namespace {

BlockingInstance instance_of(std::vector<double> means, std::vector<int> delays,
                             Matroid m, RewardLaw law) {
  BlockingInstance inst;
  inst.means = std::move(means);
  inst.laws.assign(inst.means.size(), law);
  inst.delays = Delays(std::move(delays));
  inst.matroid = std::move(m);
  return inst;
}

}  // namespace

TEST_CASE("ucb index") {
  CHECK(ucb_index(0.2, 0, 5) == std::numeric_limits<double>::infinity());
  // Radius sqrt(2 ln t / count); at ln t = 2 and count 8 the index is
  // 0.5 + sqrt(4/8), roughly 1.2071.
  for (long t : {2L, 7L, 100L, 100000L}) {
    CHECK(ucb_index(0.5, 8, t) ==
          doctest::Approx(0.5 + std::sqrt(2.0 * std::log(double(t)) / 8.0)));
  }
  CHECK(0.5 + std::sqrt(2.0 * 2.0 / 8.0) == doctest::Approx(1.2071).epsilon(1e-4));
  // Radius vanishes as the count grows.
  CHECK(ucb_index(0.7, 100000000000L, 100) == doctest::Approx(0.7).epsilon(1e-4));
  CHECK(ucb_index(0.5, 1, 1) == doctest::Approx(0.5));  // ln(1) = 0
  CHECK_THROWS_AS((void)ucb_index(0.5, 1, 0), Error);
}

TEST_CASE("single-round decisions") {
  // Always-sampled offsets via unit delays.
  const BlockingInstance rank1 = instance_of(
      {0.9, 0.4}, {1, 1}, Matroid::uniform(2, 1), RewardLaw::kDeterministic);
  OffsetVector off;
  off.u = {0, 0};
  CHECK(ig_step(rank1, off, 0) == std::vector<int>{0});
  CHECK(is_step(off, rank1.delays, 0) == std::vector<int>{0, 1});

  // Empty sampled set: with offset 0 and delay 2, odd rounds are idle.
  const BlockingInstance gap = instance_of(
      {0.9, 0.4}, {2, 2}, Matroid::uniform(2, 1), RewardLaw::kDeterministic);
  CHECK(ig_step(gap, off, 1).empty());
  UcbState fresh(2);
  CHECK(ib_step(gap, off, 1, fresh).empty());

  // Greedy on the triangle ranks by mean and checks out against brute force.
  const BlockingInstance tri = instance_of(
      {0.3, 0.2, 0.1}, {1, 1, 1},
      Matroid::graphic(3, {{0, 1}, {1, 2}, {2, 0}}), RewardLaw::kDeterministic);
  OffsetVector tri_off;
  tri_off.u = {0, 0, 0};
  const std::vector<int> picked = ig_step(tri, tri_off, 0);
  CHECK(picked == std::vector<int>{0, 1});
  double value = 0.0;
  for (int e : picked) value += tri.means[e];
  CHECK(value == doctest::Approx(
                     test::brute_force_max_weight(tri.matroid, {0, 1, 2}, tri.means)));
}

TEST_CASE("ucb decision with no observations explores lowest ids") {
  const BlockingInstance inst = instance_of(
      {0.1, 0.2, 0.3, 0.4}, {1, 1, 1, 1}, Matroid::uniform(4, 2),
      RewardLaw::kDeterministic);
  OffsetVector off;
  off.u = {0, 0, 0, 0};
  UcbState fresh(4);
  CHECK(ib_step(inst, off, 0, fresh) == std::vector<int>{0, 1});
}

TEST_CASE("converged ucb estimates reproduce the greedy decision") {
  Rng rng(0x1b);
  for (int trial = 0; trial < 30; ++trial) {
    int k = 0;
    Matroid m = test::random_matroid(rng, 6, &k);
    std::vector<double> means(k);
    for (double& v : means) v = 0.05 + 0.9 * rng.next_unit();
    const BlockingInstance inst = instance_of(
        means, std::vector<int>(k, 1 + static_cast<int>(rng.next_u64() % 3)),
        std::move(m), RewardLaw::kDeterministic);
    Rng orng(trial);
    const OffsetVector off = sample_offsets(inst.delays, orng);
    UcbState converged(k);
    for (int i = 0; i < k; ++i) {
      converged.counts[i] = 4000000000000000L;
      converged.means[i] = means[i];
    }
    for (std::int64_t t = 1; t < 12; ++t) {
      CHECK(ib_step(inst, off, t, converged) == ig_step(inst, off, t));
    }
  }
}

TEST_CASE("naive greedy") {
  const BlockingInstance rank1 = instance_of(
      {0.2, 0.9, 0.5}, {1, 1, 1}, Matroid::uniform(3, 1),
      RewardLaw::kDeterministic);
  BlockingEnv env(rank1);
  CHECK(naive_greedy_step(rank1, env) == std::vector<int>{1});

  // Depth-2 tight example: the greedy alternates between the two layers.
  const BlockingInstance layered = tight_example_instance(2, 1e-6);
  const RunTrace trace =
      run({PolicyVariant::kNaiveGreedy}, layered, 8, 1, TraceDetail::kFull);
  for (long t = 0; t < 8; ++t) {
    if (t % 2 == 0) {
      CHECK(trace.played_sets[t] == std::vector<int>{1, 2});  // deeper layer
    } else {
      CHECK(trace.played_sets[t] == std::vector<int>{0});
    }
  }

  // Nothing available, nothing played.
  BlockingInstance solo = instance_of({0.5}, {5}, Matroid::uniform(1, 1),
                                      RewardLaw::kDeterministic);
  BlockingEnv env2(solo);
  Rng rng(1);
  env2.step(std::vector<int>{0}, rng);
  CHECK(naive_greedy_step(solo, env2).empty());
}

TEST_CASE("independent sampling step") {
  Rng rng(0xc01);
  const std::vector<int> available{0, 1, 2};
  CHECK(independent_sampling_step(available, std::vector<double>{0.0, 0.0, 0.0},
                                  rng)
            .empty());
  CHECK(independent_sampling_step(available, std::vector<double>{1.0, 1.0, 1.0},
                                  rng) == available);
}

TEST_CASE("run determinism and the coupling of sampled sets") {
  const BlockingInstance inst = instance_of(
      {0.9, 0.6, 0.3}, {2, 3, 2}, Matroid::uniform(3, 1), RewardLaw::kBernoulli);

  const RunTrace a =
      run({PolicyVariant::kInterleavedGreedy}, inst, 500, 99, TraceDetail::kFull);
  const RunTrace b =
      run({PolicyVariant::kInterleavedGreedy}, inst, 500, 99, TraceDetail::kFull);
  CHECK(a.round_reward == b.round_reward);
  CHECK(a.played_sets == b.played_sets);
  CHECK(a.offsets->u == b.offsets->u);

  const RunTrace ucb =
      run({PolicyVariant::kInterleavedUcb}, inst, 500, 99, TraceDetail::kFull);
  CHECK(ucb.offsets->u == a.offsets->u);
  for (long t = 0; t < 500; ++t) {
    CHECK(ucb.sampled_sets[t] == a.sampled_sets[t]);
    CHECK(ucb.played_sets[t].size() == a.played_sets[t].size());
  }
}

TEST_CASE("degenerate single-arm run") {
  const BlockingInstance inst = instance_of({1.0}, {1}, Matroid::uniform(1, 1),
                                            RewardLaw::kDeterministic);
  const RunTrace trace = run({PolicyVariant::kInterleavedGreedy}, inst, 100, 5);
  CHECK(trace.cum_reward == doctest::Approx(100.0));
}

TEST_CASE("conservation and play counts") {
  const BlockingInstance inst = instance_of(
      {0.8, 0.5, 0.2, 0.7}, {2, 1, 3, 2},
      Matroid::partition({{0, 1}, {2, 3}}, {1, 1}), RewardLaw::kBernoulli);
  const RunTrace trace =
      run({PolicyVariant::kInterleavedUcb}, inst, 2000, 17, TraceDetail::kFull);
  double total = 0.0;
  for (double r : trace.round_reward) total += r;
  CHECK(total == trace.cum_reward);

  std::vector<long> counts(4, 0);
  for (const auto& played : trace.played_sets) {
    for (int arm : played) ++counts[arm];
  }
  CHECK(counts == trace.play_counts);
}

TEST_CASE("greedy round value equals the weighted rank of the sampled set") {
  const BlockingInstance inst = instance_of(
      {0.9, 0.7, 0.5, 0.3}, {2, 3, 2, 4},
      Matroid::graphic(3, {{0, 1}, {1, 2}, {2, 0}, {0, 1}}),
      RewardLaw::kDeterministic);
  const SubmodularFn f = SubmodularFn::weighted_rank(inst.matroid, inst.means);
  const RunTrace trace =
      run({PolicyVariant::kInterleavedGreedy}, inst, 300, 23, TraceDetail::kFull);
  for (long t = 0; t < 300; ++t) {
    CHECK(trace.round_mean_value[t] ==
          doctest::Approx(f.eval(trace.sampled_sets[t])).epsilon(1e-12));
  }
}

TEST_CASE("every policy respects blocking and independence under fuzzing") {
  Rng rng(0xfade);
  const PolicyVariant variants[] = {
      PolicyVariant::kInterleavedSubmodular, PolicyVariant::kInterleavedGreedy,
      PolicyVariant::kInterleavedUcb, PolicyVariant::kNaiveGreedy,
      PolicyVariant::kIndependentSampling};
  for (int trial = 0; trial < 60; ++trial) {
    int k = 0;
    Matroid m = test::random_matroid(rng, 6, &k);
    std::vector<double> means(k);
    for (double& v : means) v = rng.next_unit();
    std::vector<int> delays(k);
    for (int& d : delays) d = 1 + static_cast<int>(rng.next_u64() % 4);
    BlockingInstance inst = instance_of(means, delays, std::move(m),
                                        trial % 2 == 0 ? RewardLaw::kBernoulli
                                                       : RewardLaw::kDeterministic);
    for (PolicyVariant v : variants) {
      const bool unconstrained = v == PolicyVariant::kInterleavedSubmodular ||
                                 v == PolicyVariant::kIndependentSampling;
      if (unconstrained && inst.matroid.full_rank() != k) {
        continue;  // these play every chosen arm; they need a free matroid
      }
      // The environment throws on any blocking or independence violation.
      CHECK_NOTHROW((void)run({v}, inst, 400, rng.next_u64()));
    }
  }
}

TEST_CASE("ucb play sets match greedy after convergence on deterministic rewards") {
  // Seed 4 separates the phases inside each block, so the schedule keeps
  // every arm's play count growing and the index order settles quickly.
  const BlockingInstance inst = instance_of(
      {0.9, 0.7, 0.5, 0.3}, {2, 2, 3, 3},
      Matroid::partition({{0, 1}, {2, 3}}, {1, 1}), RewardLaw::kDeterministic);
  const long horizon = 4000;
  const RunTrace ig =
      run({PolicyVariant::kInterleavedGreedy}, inst, horizon, 4, TraceDetail::kFull);
  const RunTrace ib =
      run({PolicyVariant::kInterleavedUcb}, inst, horizon, 4, TraceDetail::kFull);
  const long burn_in = 4 * 3 * 10;  // k * d_max * 10
  for (long t = burn_in; t < horizon; ++t) {
    CHECK(ib.played_sets[t] == ig.played_sets[t]);
  }
}
