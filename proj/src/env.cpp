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

#include "mbb/env.hpp"

#include <string>

#include "mbb/error.hpp"

namespace mbb {

void BlockingInstance::validate() const {
  const int k = arm_count();
  if (k == 0) fail(ErrorCode::kInvalidArgument, "instance needs at least one arm");
  if (static_cast<int>(laws.size()) != k || delays.size() != k ||
      matroid.size() != k) {
    fail(ErrorCode::kInvalidArgument, "arm count mismatch across instance fields");
  }
  for (double m : means) {
    if (!(m >= 0.0 && m <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "arm means must lie in [0, 1]");
    }
  }
  for (int d : delays.d) {
    if (d < 1) fail(ErrorCode::kInvalidArgument, "delays must be positive");
  }
}

BlockingEnv::BlockingEnv(const BlockingInstance& inst)
    : inst_(&inst), builder_(inst.matroid.builder()) {
  inst.validate();
  remaining_block_.assign(inst.arm_count(), 0);
  seen_.assign(inst.arm_count(), 0);
}

void BlockingEnv::available_into(std::vector<int>& out) const {
  out.clear();
  for (int i = 0; i < static_cast<int>(remaining_block_.size()); ++i) {
    if (remaining_block_[i] == 0) out.push_back(i);
  }
}

std::vector<int> BlockingEnv::available_arms() const {
  std::vector<int> out;
  available_into(out);
  return out;
}

double BlockingEnv::step(std::span<const int> play, Rng& reward_rng,
                         std::vector<double>* rewards_out) {
  for (int arm : play) {
    if (arm < 0 || arm >= inst_->arm_count()) {
      fail(ErrorCode::kOutOfRange, "played arm id out of range");
    }
    if (remaining_block_[arm] != 0) {
      fail(ErrorCode::kProtocolViolation,
           "policy played blocked arm " + std::to_string(arm) + " at round " +
               std::to_string(round_));
    }
    if (seen_[arm] == round_ + 1) {
      fail(ErrorCode::kProtocolViolation, "policy played an arm twice in one round");
    }
    seen_[arm] = round_ + 1;  // round-stamped duplicate marker
  }
  // Incremental insertion succeeds for every element iff the set is
  // independent (hereditary property).
  builder_.reset();
  for (int arm : play) {
    if (!builder_.try_add(arm)) {
      fail(ErrorCode::kProtocolViolation,
           "policy played a dependent set at round " + std::to_string(round_));
    }
  }

  if (rewards_out != nullptr) rewards_out->clear();
  double total = 0.0;
  for (int arm : play) {
    double reward = inst_->means[arm];
    if (inst_->laws[arm] == RewardLaw::kBernoulli) {
      reward = reward_rng.bernoulli(reward) ? 1.0 : 0.0;
    }
    total += reward;
    if (rewards_out != nullptr) rewards_out->push_back(reward);
  }

  for (int& c : remaining_block_) {
    if (c > 0) --c;
  }
  for (int arm : play) remaining_block_[arm] = inst_->delays.d[arm] - 1;
  ++round_;
  return total;
}

}  // namespace mbb
