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

#include "mbb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mbb/error.hpp"

namespace mbb {
namespace {

// Sub-stream tags. Offsets depend on the run seed only, so policies sharing a
// seed operate on identical sampled sets; reward and coin streams are salted
// by the policy variant.
constexpr std::uint64_t kOffsetsTag = 1;
constexpr std::uint64_t kRewardTagBase = 100;
constexpr std::uint64_t kCoinTagBase = 200;

int variant_index(PolicyVariant v) { return static_cast<int>(v); }

void greedy_into(Matroid::BasisBuilder& builder, std::span<const int> ordered,
                 std::vector<int>& out) {
  builder.reset();
  out.clear();
  for (int e : ordered) {
    if (builder.try_add(e)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
}

std::vector<double> resolve_probs(const PolicySpec& spec,
                                  const BlockingInstance& inst) {
  if (spec.sampling_probs.empty()) {
    std::vector<double> probs(inst.arm_count());
    for (int i = 0; i < inst.arm_count(); ++i) {
      probs[i] = 1.0 / static_cast<double>(inst.delays.d[i]);
    }
    return probs;
  }
  if (static_cast<int>(spec.sampling_probs.size()) != inst.arm_count()) {
    fail(ErrorCode::kInvalidArgument, "one sampling probability per arm required");
  }
  for (double p : spec.sampling_probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "sampling probabilities must lie in [0, 1]");
    }
  }
  return spec.sampling_probs;
}

}  // namespace

const char* policy_name(PolicyVariant v) {
  switch (v) {
    case PolicyVariant::kInterleavedSubmodular: return "is";
    case PolicyVariant::kInterleavedGreedy: return "ig";
    case PolicyVariant::kInterleavedUcb: return "ib";
    case PolicyVariant::kNaiveGreedy: return "greedy";
    case PolicyVariant::kIndependentSampling: return "indep";
  }
  return "?";
}

std::optional<PolicyVariant> policy_from_name(const std::string& name) {
  if (name == "is") return PolicyVariant::kInterleavedSubmodular;
  if (name == "ig") return PolicyVariant::kInterleavedGreedy;
  if (name == "ib") return PolicyVariant::kInterleavedUcb;
  if (name == "greedy") return PolicyVariant::kNaiveGreedy;
  if (name == "indep") return PolicyVariant::kIndependentSampling;
  return std::nullopt;
}

bool policy_is_interleaved(PolicyVariant v) {
  return v == PolicyVariant::kInterleavedSubmodular ||
         v == PolicyVariant::kInterleavedGreedy ||
         v == PolicyVariant::kInterleavedUcb;
}

void UcbState::observe(int arm, double reward) {
  ++counts[arm];
  means[arm] += (reward - means[arm]) / static_cast<double>(counts[arm]);
}

double ucb_index(double emp_mean, long count, long t) {
  if (t < 1) fail(ErrorCode::kInvalidArgument, "round counter is 1-based");
  if (count == 0) return std::numeric_limits<double>::infinity();
  return emp_mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                              static_cast<double>(count));
}

std::vector<int> is_step(const OffsetVector& off, const Delays& delays,
                         std::int64_t round) {
  return sampled_set(off, delays, round);
}

std::vector<int> ig_step(const BlockingInstance& inst, const OffsetVector& off,
                         std::int64_t round) {
  const std::vector<int> sampled = sampled_set(off, inst.delays, round);
  return inst.matroid.max_weight_independent_set(sampled, inst.means);
}

std::vector<int> ib_step(const BlockingInstance& inst, const OffsetVector& off,
                         std::int64_t round, const UcbState& ucb) {
  const std::vector<int> sampled = sampled_set(off, inst.delays, round);
  std::vector<double> index(inst.arm_count(), 0.0);
  for (int arm : sampled) {
    index[arm] = ucb_index(ucb.means[arm], ucb.counts[arm], round + 1);
  }
  return inst.matroid.max_weight_independent_set(sampled, index);
}

std::vector<int> naive_greedy_step(const BlockingInstance& inst,
                                   const BlockingEnv& env) {
  return inst.matroid.max_weight_independent_set(env.available_arms(),
                                                 inst.means);
}

std::vector<int> independent_sampling_step(std::span<const int> available,
                                           std::span<const double> probs,
                                           Rng& rng) {
  std::vector<int> out;
  for (int arm : available) {
    if (!(probs[arm] >= 0.0 && probs[arm] <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "sampling probabilities must lie in [0, 1]");
    }
    if (rng.bernoulli(probs[arm])) out.push_back(arm);
  }
  return out;
}

RunTrace run(const PolicySpec& spec, const BlockingInstance& inst, long rounds,
             std::uint64_t seed, TraceDetail detail) {
  inst.validate();
  if (rounds < 1) fail(ErrorCode::kInvalidArgument, "at least one round required");
  const int k = inst.arm_count();
  const int vi = variant_index(spec.variant);
  const bool interleaved = policy_is_interleaved(spec.variant);

  Rng offset_rng(mix64(seed, kOffsetsTag));
  Rng reward_rng(mix64(seed, kRewardTagBase + vi));
  Rng coin_rng(mix64(seed, kCoinTagBase + vi));

  RunTrace trace;
  trace.policy = spec.variant;
  trace.rounds = rounds;
  trace.seed = seed;
  trace.round_reward.resize(rounds);
  trace.round_mean_value.resize(rounds);
  trace.play_counts.assign(k, 0);
  if (detail == TraceDetail::kFull) {
    trace.sampled_sets.resize(rounds);
    trace.played_sets.resize(rounds);
    trace.arm_rewards.resize(rounds);
  }

  // Offsets are drawn once per run; each arm's schedule is then exactly
  // periodic with period d_i.
  std::vector<int> phase(k, 0);
  if (interleaved) {
    const OffsetVector off = sample_offsets(inst.delays, offset_rng);
    for (int i = 0; i < k; ++i) {
      phase[i] = selection_phase(off.u[i], inst.delays.d[i]);
    }
    trace.offsets = off;
  }

  std::vector<int> mean_order(k);
  std::iota(mean_order.begin(), mean_order.end(), 0);
  std::stable_sort(mean_order.begin(), mean_order.end(), [&](int a, int b) {
    if (inst.means[a] != inst.means[b]) return inst.means[a] > inst.means[b];
    return a < b;
  });

  const std::vector<double> probs =
      spec.variant == PolicyVariant::kIndependentSampling
          ? resolve_probs(spec, inst)
          : std::vector<double>();

  BlockingEnv env(inst);
  UcbState ucb(k);
  auto builder = inst.matroid.builder();

  std::vector<int> eligible, ordered, play;
  std::vector<char> in_eligible(k, 0);
  std::vector<double> rewards;
  std::vector<std::pair<double, int>> scored;
  eligible.reserve(k);
  ordered.reserve(k);
  play.reserve(k);
  scored.reserve(k);

  for (long t = 0; t < rounds; ++t) {
    if (interleaved) {
      eligible.clear();
      for (int i = 0; i < k; ++i) {
        if (t % inst.delays.d[i] == phase[i]) eligible.push_back(i);
      }
    } else {
      env.available_into(eligible);
    }

    switch (spec.variant) {
      case PolicyVariant::kInterleavedSubmodular:
        play = eligible;
        break;
      case PolicyVariant::kInterleavedGreedy:
      case PolicyVariant::kNaiveGreedy: {
        std::fill(in_eligible.begin(), in_eligible.end(), 0);
        for (int i : eligible) in_eligible[i] = 1;
        ordered.clear();
        for (int i : mean_order) {
          if (in_eligible[i]) ordered.push_back(i);
        }
        greedy_into(builder, ordered, play);
        break;
      }
      case PolicyVariant::kInterleavedUcb: {
        scored.clear();
        for (int i : eligible) {
          scored.emplace_back(ucb_index(ucb.means[i], ucb.counts[i], t + 1), i);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first > b.first;
          return a.second < b.second;
        });
        ordered.clear();
        for (const auto& [idx, i] : scored) ordered.push_back(i);
        greedy_into(builder, ordered, play);
        break;
      }
      case PolicyVariant::kIndependentSampling: {
        play.clear();
        for (int i : eligible) {
          if (coin_rng.bernoulli(probs[i])) play.push_back(i);
        }
        break;
      }
    }

    const double reward = env.step(play, reward_rng, &rewards);
    double mean_value = 0.0;
    for (std::size_t j = 0; j < play.size(); ++j) {
      const int arm = play[j];
      mean_value += inst.means[arm];
      ++trace.play_counts[arm];
      if (spec.variant == PolicyVariant::kInterleavedUcb) {
        ucb.observe(arm, rewards[j]);
      }
    }
    trace.round_reward[t] = reward;
    trace.round_mean_value[t] = mean_value;
    trace.cum_reward += reward;
    if (detail == TraceDetail::kFull) {
      if (interleaved) trace.sampled_sets[t] = eligible;
      trace.played_sets[t] = play;
      trace.arm_rewards[t] = rewards;
    }
  }
  return trace;
}

}  // namespace mbb
