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

#ifndef MBB_SCHEDULE_HPP_
#define MBB_SCHEDULE_HPP_

#include <cstdint>
#include <vector>

#include "mbb/rng.hpp"

namespace mbb {

// Per-element blocking delays; d >= 1, measured in rounds.
struct Delays {
  std::vector<int> d;

  explicit Delays(std::vector<int> delays);
  Delays() = default;

  int size() const { return static_cast<int>(d.size()); }
  int max_delay() const;
};

// Random offsets of the interleaved schedule, discretized to u/2^32 so that
// interval membership is decided in exact integer arithmetic. The
// discretization shifts each selection probability by less than 2^-32.
struct OffsetVector {
  static constexpr std::uint64_t kScale = std::uint64_t{1} << 32;

  std::vector<std::uint32_t> u;

  int size() const { return static_cast<int>(u.size()); }
  double offset_real(int i) const {
    return static_cast<double>(u[i]) / static_cast<double>(kScale);
  }
};

// One independent uniform offset per element; deterministic given the
// generator state.
OffsetVector sample_offsets(const Delays& delays, Rng& rng);

// Exact test of whether [t/d + u/2^32, (t+1)/d + u/2^32) contains an
// integer. Rounds are 0-based; valid for t up to 2^60.
bool contains_integer(std::uint32_t offset, int delay, std::int64_t round);

// Elements whose interval covers an integer at the given round.
std::vector<int> sampled_set(const OffsetVector& off, const Delays& delays,
                             std::int64_t round);
void sampled_set_into(const OffsetVector& off, const Delays& delays,
                      std::int64_t round, std::vector<int>& out);

// The interleaved schedule of an element is exactly periodic: it is selected
// at rounds t with t mod d == phase. Used by the run loop as an O(1)
// equivalent of contains_integer.
int selection_phase(std::uint32_t offset, int delay);

}  // namespace mbb

#endif  // MBB_SCHEDULE_HPP_
