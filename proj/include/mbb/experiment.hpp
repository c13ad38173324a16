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

#ifndef MBB_EXPERIMENT_HPP_
#define MBB_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbb/bounds.hpp"
#include "mbb/env.hpp"
#include "mbb/policies.hpp"
#include "mbb/submodular.hpp"

namespace mbb {

// An experiment: one instance, a list of policies run on coupled seeds, a
// horizon and replications. Loaded from a JSON config file (schema in the
// README).
struct ExperimentConfig {
  std::string experiment_id = "experiment";
  BlockingInstance instance;
  std::optional<SubmodularFn> objective;
  std::vector<PolicySpec> policies;
  long rounds = 1;
  int replications = 1;
  std::uint64_t base_seed = 0;
  std::string output_dir;

  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Seed of replication `rep`; policies inside a replication share it, so the
// interleaved ones consume identical offset draws.
std::uint64_t replication_seed(std::uint64_t base_seed, int rep);

struct ExperimentResult {
  std::string rows_csv_path;
  std::string summary_json_path;
  std::string summary_json;
};

// Runs every replication (fanned out over MBB_WORKERS threads, output
// independent of the worker count), writes rows.csv and summary.json into
// the output directory and returns the summary. Directory precedence:
// `out_dir_override` (CLI flag), then MBB_OUT_DIR, then the config value,
// then "mbb-out".
ExperimentResult run_experiment(
    const ExperimentConfig& cfg,
    const std::optional<std::string>& out_dir_override = std::nullopt);

struct ReproduceCheck {
  std::string label;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ReproduceReport {
  std::string name;
  std::vector<ReproduceCheck> checks;
  bool pass = false;
  std::string to_json() const;
};

// Canonical fixtures with analytic targets. Names: rank1_tightness,
// greedy_one_over_k, indep_sampling, cp_remark, graphic_tight, lp_vs_dp,
// regret_curve.
ReproduceReport reproduce(const std::string& name);
std::vector<std::string> reproduce_names();

// Bound report for the instance of a config; writes bounds.json and
// bounds.csv into the output directory (same precedence as run_experiment).
std::string bounds_report_json(
    const ExperimentConfig& cfg,
    const std::optional<std::string>& out_dir_override = std::nullopt);

// Per-round sampled sets of an interleaved schedule, as CSV.
std::string check_schedule_csv(const Delays& delays, std::uint64_t seed,
                               long rounds);

// Tiny instances used by the bound-certificate fixtures; k <= 4, d <= 3,
// mixed matroid kinds.
std::vector<BlockingInstance> tiny_fixtures();

// The recursive tight-example graph for the naive greedy policy: levels
// p = 1..depth, level p holding p parallel star edges of delay p and mean
// 1 - eps/p.
BlockingInstance tight_example_instance(int depth, double eps);

}  // namespace mbb

#endif  // MBB_EXPERIMENT_HPP_
