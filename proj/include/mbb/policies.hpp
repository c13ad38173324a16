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

#ifndef MBB_POLICIES_HPP_
#define MBB_POLICIES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbb/env.hpp"
#include "mbb/matroid.hpp"
#include "mbb/schedule.hpp"

namespace mbb {

enum class PolicyVariant {
  kInterleavedSubmodular,   // plays every sampled element
  kInterleavedGreedy,       // greedy over the sampled set, true means
  kInterleavedUcb,          // greedy over the sampled set, UCB indices
  kNaiveGreedy,             // greedy over all available arms, true means
  kIndependentSampling,     // independent coin per available arm
};

struct PolicySpec {
  PolicyVariant variant = PolicyVariant::kInterleavedGreedy;
  // Independent sampling only; empty means 1/d_i per arm.
  std::vector<double> sampling_probs;
};

const char* policy_name(PolicyVariant v);
std::optional<PolicyVariant> policy_from_name(const std::string& name);
bool policy_is_interleaved(PolicyVariant v);

// Empirical statistics used by the UCB policy: play counts and running means
// of the observed realizations.
struct UcbState {
  std::vector<long> counts;
  std::vector<double> means;

  explicit UcbState(int arms) : counts(arms, 0), means(arms, 0.0) {}
  void observe(int arm, double reward);
};

// UCB index for a 1-based round t; an unplayed arm gets +infinity so it is
// explored before any finite index.
double ucb_index(double emp_mean, long count, long t);

// Single-round decisions, exposed for direct use and testing. `round` is the
// 0-based environment round.
std::vector<int> is_step(const OffsetVector& off, const Delays& delays,
                         std::int64_t round);
std::vector<int> ig_step(const BlockingInstance& inst, const OffsetVector& off,
                         std::int64_t round);
std::vector<int> ib_step(const BlockingInstance& inst, const OffsetVector& off,
                         std::int64_t round, const UcbState& ucb);
std::vector<int> naive_greedy_step(const BlockingInstance& inst,
                                   const BlockingEnv& env);
std::vector<int> independent_sampling_step(std::span<const int> available,
                                           std::span<const double> probs,
                                           Rng& rng);

enum class TraceDetail { kSummary, kFull };

// Per-run record. Summary detail keeps per-round scalars only; full detail
// additionally stores the sampled and played sets and per-arm realizations.
struct RunTrace {
  PolicyVariant policy = PolicyVariant::kInterleavedGreedy;
  long rounds = 0;
  std::uint64_t seed = 0;
  std::optional<OffsetVector> offsets;

  std::vector<double> round_reward;      // realized reward per round
  std::vector<double> round_mean_value;  // true-mean value of the played set
  std::vector<long> play_counts;
  double cum_reward = 0.0;

  std::vector<std::vector<int>> sampled_sets;
  std::vector<std::vector<int>> played_sets;
  std::vector<std::vector<double>> arm_rewards;
};

// Runs one policy for `rounds` rounds. All randomness is derived from `seed`:
// the offset sub-stream depends on the seed only (so interleaved policies
// sharing a seed share offsets), while reward and policy-coin sub-streams are
// additionally salted by the policy variant.
RunTrace run(const PolicySpec& spec, const BlockingInstance& inst, long rounds,
             std::uint64_t seed, TraceDetail detail = TraceDetail::kSummary);

}  // namespace mbb

#endif  // MBB_POLICIES_HPP_
