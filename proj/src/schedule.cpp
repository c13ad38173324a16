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

#include "mbb/schedule.hpp"

#include <string>

#include "mbb/error.hpp"

namespace mbb {

Delays::Delays(std::vector<int> delays) : d(std::move(delays)) {
  for (int v : d) {
    if (v < 1) fail(ErrorCode::kInvalidArgument, "delays must be positive");
  }
}

int Delays::max_delay() const {
  int m = 1;
  for (int v : d) m = std::max(m, v);
  return m;
}

OffsetVector sample_offsets(const Delays& delays, Rng& rng) {
  OffsetVector off;
  off.u.resize(delays.d.size());
  for (std::uint32_t& v : off.u) v = rng.next_u32();
  return off;
}

bool contains_integer(std::uint32_t offset, int delay, std::int64_t round) {
  if (delay < 1) fail(ErrorCode::kInvalidArgument, "delay must be positive");
  if (round < 0 || round > (std::int64_t{1} << 60)) {
    fail(ErrorCode::kOutOfRange, "round outside the supported range");
  }
  // With M = 2^32, N = t*M + u*d and D = d*M the interval is
  // [N/D, (N+M)/D); it holds an integer iff ceil(N/D)*D < N + M.
  using u128 = unsigned __int128;
  const u128 m = OffsetVector::kScale;
  const u128 n = u128(round) * m + u128(offset) * u128(delay);
  const u128 dd = u128(delay) * m;
  const u128 q = (n + dd - 1) / dd;
  return q * dd < n + m;
}

void sampled_set_into(const OffsetVector& off, const Delays& delays,
                      std::int64_t round, std::vector<int>& out) {
  if (off.size() != delays.size()) {
    fail(ErrorCode::kInvalidArgument, "offset and delay vectors must align");
  }
  out.clear();
  for (int i = 0; i < off.size(); ++i) {
    if (contains_integer(off.u[i], delays.d[i], round)) out.push_back(i);
  }
}

std::vector<int> sampled_set(const OffsetVector& off, const Delays& delays,
                             std::int64_t round) {
  std::vector<int> out;
  sampled_set_into(off, delays, round, out);
  return out;
}

int selection_phase(std::uint32_t offset, int delay) {
  for (int t = 0; t < delay; ++t) {
    if (contains_integer(offset, delay, t)) return t;
  }
  fail(ErrorCode::kInternal, "no selection within one period");
}

}  // namespace mbb
