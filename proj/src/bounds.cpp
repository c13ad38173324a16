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

#include "mbb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mbb/error.hpp"
#include "mbb/rng.hpp"
#include "mbb/simplex.hpp"

namespace mbb {
namespace {

constexpr long kDpStateCap = 1'000'000;
constexpr long kDpHorizonCap = 10'000;
constexpr int kLpArmCap = 16;
constexpr int kCpArmCap = 12;
constexpr int kDpMaskCap = 20;

}  // namespace

double dp_optimal(const BlockingInstance& inst, long horizon) {
  inst.validate();
  if (horizon < 1) fail(ErrorCode::kInvalidArgument, "horizon must be positive");
  if (horizon > kDpHorizonCap) fail(ErrorCode::kTooLarge, "horizon too large for exact value iteration");
  const int k = inst.arm_count();
  if (k > kDpMaskCap) fail(ErrorCode::kTooLarge, "too many arms for exact value iteration");

  long states = 1;
  std::vector<long> radix(k);
  for (int i = 0; i < k; ++i) {
    radix[i] = states;
    states *= inst.delays.d[i];
    if (states > kDpStateCap) {
      fail(ErrorCode::kTooLarge, "blocking state space too large for exact value iteration");
    }
  }

  // Decoded remaining-block vectors and availability masks, state-indexed.
  std::vector<std::uint8_t> counters(static_cast<std::size_t>(states) * k);
  std::vector<std::uint32_t> avail(states);
  for (long s = 0; s < states; ++s) {
    long rest = s;
    std::uint32_t mask = 0;
    for (int i = 0; i < k; ++i) {
      const int c = static_cast<int>(rest % inst.delays.d[i]);
      rest /= inst.delays.d[i];
      counters[static_cast<std::size_t>(s) * k + i] = static_cast<std::uint8_t>(c);
      if (c == 0) mask |= 1u << i;
    }
    avail[s] = mask;
  }

  // Playing a maximal set is not always optimal under blocking, so every
  // independent subset of the availability mask is an action. Cached per
  // distinct mask.
  struct Action {
    std::uint32_t mask;
    double mean_value;
  };
  std::map<std::uint32_t, std::vector<Action>> action_cache;
  std::vector<int> scratch;
  auto actions_for = [&](std::uint32_t mask) -> const std::vector<Action>& {
    auto it = action_cache.find(mask);
    if (it != action_cache.end()) return it->second;
    std::vector<Action> actions;
    std::uint32_t sub = mask;
    for (;;) {
      scratch.clear();
      double value = 0.0;
      for (int i = 0; i < k; ++i) {
        if (sub & (1u << i)) {
          scratch.push_back(i);
          value += inst.means[i];
        }
      }
      if (inst.matroid.is_independent(scratch)) actions.push_back({sub, value});
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
    return action_cache.emplace(mask, std::move(actions)).first->second;
  };

  std::vector<const std::vector<Action>*> state_actions(states);
  for (long s = 0; s < states; ++s) state_actions[s] = &actions_for(avail[s]);

  std::vector<double> value(states, 0.0), next_value(states, 0.0);
  for (long t = 0; t < horizon; ++t) {
    for (long s = 0; s < states; ++s) {
      const std::uint8_t* c = &counters[static_cast<std::size_t>(s) * k];
      double best = 0.0;
      for (const Action& a : *state_actions[s]) {
        long ns = 0;
        for (int i = 0; i < k; ++i) {
          int ci = c[i];
          ci = (a.mask & (1u << i)) ? inst.delays.d[i] - 1 : std::max(ci - 1, 0);
          ns += radix[i] * ci;
        }
        best = std::max(best, a.mean_value + value[ns]);
      }
      next_value[s] = best;
    }
    std::swap(value, next_value);
  }
  return value[0];  // all arms initially available
}

double lp_upper_bound(const BlockingInstance& inst, long horizon) {
  inst.validate();
  if (horizon < 1) fail(ErrorCode::kInvalidArgument, "horizon must be positive");
  const int k = inst.arm_count();
  if (k > kLpArmCap) {
    fail(ErrorCode::kTooLarge, "ground set too large to enumerate rank constraints");
  }
  LinearProgram lp;
  lp.objective = inst.means;
  lp.lower.assign(k, 0.0);
  lp.upper.resize(k);
  for (int i = 0; i < k; ++i) {
    lp.upper[i] = 1.0 / static_cast<double>(inst.delays.d[i]);
  }
  std::vector<int> subset;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    LpConstraint c;
    c.coeffs.assign(k, 0.0);
    subset.clear();
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        c.coeffs[i] = 1.0;
        subset.push_back(i);
      }
    }
    c.relation = Relation::kLe;
    c.rhs = static_cast<double>(inst.matroid.rank(subset));
    lp.constraints.push_back(std::move(c));
  }
  const LpOutcome out = solve_lp(lp);
  if (out.status != LpStatus::kOptimal) {
    fail(ErrorCode::kInternal, "rank-constraint LP must be solvable");
  }
  return static_cast<double>(horizon) * out.value;
}

double cp_upper_bound(const SubmodularFn& f, const Delays& delays, long horizon) {
  if (horizon < 1) fail(ErrorCode::kInvalidArgument, "horizon must be positive");
  if (f.size() != delays.size()) {
    fail(ErrorCode::kInvalidArgument, "objective and delays must align");
  }
  if (f.size() > kCpArmCap) {
    fail(ErrorCode::kTooLarge, "ground set too large for the closure bound");
  }
  std::vector<double> z(f.size());
  for (int i = 0; i < f.size(); ++i) {
    z[i] = 1.0 / static_cast<double>(delays.d[i]);
  }
  const double peak = f.concave_closure(z);

  // The closure of a monotone function is coordinate-wise monotone, so the
  // box optimum sits at z = 1/d. Audit the claim on random interior points
  // instead of trusting it silently.
  Rng audit_rng(0x4d6f6e6f746f6eULL);
  std::vector<double> probe(f.size());
  for (int trial = 0; trial < 20; ++trial) {
    for (int i = 0; i < f.size(); ++i) probe[i] = z[i] * audit_rng.next_unit();
    if (f.concave_closure(probe) > peak + 1e-7) {
      fail(ErrorCode::kInternal, "closure bound audit failed: interior point beat the corner");
    }
  }
  return static_cast<double>(horizon) * peak;
}

GapTable compute_gap_table(std::span<const double> means, long horizon) {
  if (horizon < 1) fail(ErrorCode::kInvalidArgument, "horizon must be positive");
  const int k = static_cast<int>(means.size());
  GapTable table;
  table.order.resize(k);
  for (int i = 0; i < k; ++i) table.order[i] = i;
  std::stable_sort(table.order.begin(), table.order.end(),
                   [&](int a, int b) { return means[a] > means[b]; });
  table.sorted_means.resize(k);
  for (int i = 0; i < k; ++i) table.sorted_means[i] = means[table.order[i]];
  for (int i = 0; i + 1 < k; ++i) {
    if (table.sorted_means[i] == table.sorted_means[i + 1]) {
      fail(ErrorCode::kInvalidArgument, "gap table requires pairwise distinct means");
    }
  }
  table.log_horizon = std::log(static_cast<double>(horizon));
  table.gap.assign(k, std::vector<double>(k, 0.0));
  table.threshold.assign(k, std::vector<long>(k, 0));
  double inverse_adjacent = 0.0, gap_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double gap = table.sorted_means[i] - table.sorted_means[j];
      table.gap[i][j] = gap;
      if (i < j) {
        const double raw = std::floor(8.0 * table.log_horizon / (gap * gap));
        table.threshold[i][j] =
            static_cast<long>(std::min(raw, 9.0e18));  // near-equal means
        gap_sum += gap;
      }
    }
  }
  for (int j = 1; j < k; ++j) {
    inverse_adjacent += 1.0 / table.gap[j - 1][j];
  }
  table.gap_dependent_bound = 16.0 * table.log_horizon * inverse_adjacent +
                              (std::numbers::pi * std::numbers::pi / 3.0) * gap_sum;
  return table;
}

GapDecomposition gap_decomposition(const Matroid& m,
                                   std::span<const int> first_set,
                                   std::span<const int> second_set,
                                   std::span<const double> means) {
  if (means.size() != static_cast<std::size_t>(m.size())) {
    fail(ErrorCode::kInvalidArgument, "one mean per ground element required");
  }
  GapDecomposition out;
  // The bijection runs from the second set into the first, so each element
  // of the first set is charged the gap to its matched partner.
  out.bijection = m.exchange_bijection(second_set, first_set);
  for (const auto& [from, to] : out.bijection.pairs) {
    const double gap = means[to] - means[from];
    out.pair_gaps.emplace_back(to, from, gap);
    out.total += gap;
  }
  std::sort(out.pair_gaps.begin(), out.pair_gaps.end());
  return out;
}

std::vector<std::vector<int>> periodize(
    const std::vector<std::vector<int>>& schedule, int period,
    const Delays& delays,
    const std::function<double(std::span<const int>)>& value) {
  const long horizon = static_cast<long>(schedule.size());
  if (period < 1 || period > horizon) {
    fail(ErrorCode::kInvalidArgument, "period must lie in [1, horizon]");
  }
  for (int d : delays.d) {
    if (d != period) {
      fail(ErrorCode::kInvalidArgument, "periodization requires every delay to equal the period");
    }
  }
  std::vector<long> last_played(delays.size(), -1);
  for (long t = 0; t < horizon; ++t) {
    for (int e : schedule[t]) {
      if (e < 0 || e >= delays.size()) fail(ErrorCode::kOutOfRange, "element id out of range");
      if (last_played[e] >= 0 && t - last_played[e] < delays.d[e]) {
        fail(ErrorCode::kInvalidArgument, "input schedule violates its blocking constraints");
      }
      last_played[e] = t;
    }
  }

  std::vector<double> round_value(horizon);
  for (long t = 0; t < horizon; ++t) round_value[t] = value(schedule[t]);
  double window = 0.0;
  for (long t = 0; t < period; ++t) window += round_value[t];
  double best = window;
  long best_start = 0;
  for (long s = 1; s + period <= horizon; ++s) {
    window += round_value[s + period - 1] - round_value[s - 1];
    if (window > best + 1e-12) {
      best = window;
      best_start = s;
    }
  }

  std::vector<std::vector<int>> out(horizon);
  for (long t = 0; t < horizon; ++t) {
    out[t] = schedule[best_start + (t % period)];
  }
  return out;
}

BoundReport compute_bounds(const BlockingInstance& inst, long horizon,
                           const std::optional<SubmodularFn>& objective) {
  inst.validate();
  BoundReport report;
  report.horizon = horizon;
  report.d_max = inst.delays.max_delay();
  report.matroid_rank = inst.matroid.full_rank();

  const SubmodularFn& f = objective.has_value()
                              ? *objective
                              : SubmodularFn::weighted_rank(inst.matroid, inst.means);
  if (f.size() <= kCpArmCap) {
    const std::vector<int> all = inst.matroid.ground_set();
    report.full_set_value = f.eval(all);
    report.cp_value = cp_upper_bound(f, inst.delays, horizon);
  }
  if (inst.arm_count() <= 12) {
    report.lp_value = lp_upper_bound(inst, horizon);
  }
  long states = 1;
  bool dp_ok = horizon <= kDpHorizonCap && inst.arm_count() <= kDpMaskCap;
  for (int d : inst.delays.d) {
    states *= d;
    if (states > kDpStateCap) {
      dp_ok = false;
      break;
    }
  }
  if (dp_ok) report.dp_value = dp_optimal(inst, horizon);

  bool distinct = true;
  std::vector<double> sorted(inst.means);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i] == sorted[i + 1]) distinct = false;
  }
  if (distinct && inst.arm_count() >= 2) {
    report.gaps = compute_gap_table(inst.means, horizon);
  }
  return report;
}

}  // namespace mbb
