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

#ifndef MBB_ENV_HPP_
#define MBB_ENV_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mbb/matroid.hpp"
#include "mbb/rng.hpp"
#include "mbb/schedule.hpp"

namespace mbb {

enum class RewardLaw { kBernoulli, kDeterministic };

// A blocking-bandit problem: arm means, reward laws, delays and the matroid
// constraint. The optional horizon hint is reporting metadata; policies never
// read it.
struct BlockingInstance {
  std::vector<double> means;
  std::vector<RewardLaw> laws;
  Delays delays;
  Matroid matroid;
  std::optional<long> horizon_hint;

  int arm_count() const { return static_cast<int>(means.size()); }
  void validate() const;
};

// Mutable blocking state with semi-bandit reward realization. Playing a
// blocked arm or a dependent set is a protocol violation and throws; it
// signals a buggy policy, not an environment condition.
class BlockingEnv {
 public:
  explicit BlockingEnv(const BlockingInstance& inst);

  long round() const { return round_; }

  bool is_available(int arm) const { return remaining_block_[arm] == 0; }
  void available_into(std::vector<int>& out) const;
  std::vector<int> available_arms() const;

  // Plays `play`, draws one reward per played arm, advances blocking
  // counters and the round. Returns the realized reward sum; per-arm
  // realizations are written to `rewards_out` when provided (aligned with
  // `play`).
  double step(std::span<const int> play, Rng& reward_rng,
              std::vector<double>* rewards_out = nullptr);

 private:
  const BlockingInstance* inst_;
  long round_ = 0;
  std::vector<int> remaining_block_;
  Matroid::BasisBuilder builder_;
  std::vector<long> seen_;
};

}  // namespace mbb

#endif  // MBB_ENV_HPP_
