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

#include "mbb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <span>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mbb/error.hpp"

namespace mbb {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::uint64_t kReplicationTag = 0x7265706c;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_set(std::span<const int> s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out.push_back('|');
    out += std::to_string(s[i]);
  }
  return out;
}

int worker_count(int jobs) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MBB_WORKERS")) {
    workers = std::atoi(env);
    if (workers < 1) fail(ErrorCode::kConfig, "MBB_WORKERS must be a positive integer");
  }
  if (workers < 1) workers = 1;
  return std::min(workers, jobs);
}

// Index-ordered parallel loop; aggregation stays deterministic because every
// job writes only its own slot.
void parallel_for(int jobs, const std::function<void(int)>& fn) {
  const int workers = worker_count(jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

RewardLaw parse_law(const std::string& name) {
  if (name == "bernoulli") return RewardLaw::kBernoulli;
  if (name == "deterministic") return RewardLaw::kDeterministic;
  fail(ErrorCode::kConfig, "unknown reward law: " + name);
}

Matroid parse_matroid(const json& j, int k) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") {
    return Matroid::uniform(k, j.at("rank").get<int>());
  }
  if (kind == "partition") {
    std::vector<std::vector<int>> blocks;
    std::vector<int> caps;
    for (const auto& b : j.at("blocks")) {
      blocks.push_back(b.at("elements").get<std::vector<int>>());
      caps.push_back(b.at("capacity").get<int>());
    }
    return Matroid::partition(std::move(blocks), std::move(caps));
  }
  if (kind == "graphic") {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    if (static_cast<int>(edges.size()) != k) {
      fail(ErrorCode::kConfig, "graphic matroid needs one edge per arm");
    }
    return Matroid::graphic(j.at("vertices").get<int>(), std::move(edges));
  }
  if (kind == "explicit") {
    return Matroid::explicit_family(
        k, j.at("independent").get<std::vector<std::vector<int>>>(),
        j.value("validate", true));
  }
  fail(ErrorCode::kConfig, "unknown matroid kind: " + kind);
}

SubmodularFn parse_objective(const json& j, const BlockingInstance& inst) {
  const std::string kind = j.at("kind").get<std::string>();
  const int k = inst.arm_count();
  if (kind == "weighted_rank") {
    return SubmodularFn::weighted_rank(inst.matroid, inst.means);
  }
  if (kind == "budget_additive") {
    return SubmodularFn::budget_additive(k, j.at("budget").get<int>());
  }
  if (kind == "coverage") {
    return SubmodularFn::coverage(
        k, j.at("covers").get<std::vector<std::vector<int>>>(),
        j.at("item_weights").get<std::vector<double>>());
  }
  if (kind == "explicit") {
    if (j.contains("file")) {
      return SubmodularFn::explicit_from_file(j.at("file").get<std::string>());
    }
    return SubmodularFn::explicit_table(k, j.at("table").get<std::vector<double>>());
  }
  fail(ErrorCode::kConfig, "unknown objective kind: " + kind);
}

PolicySpec parse_policy(const json& j) {
  PolicySpec spec;
  std::string name;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else {
    name = j.at("policy").get<std::string>();
    if (j.contains("probs")) {
      spec.sampling_probs = j.at("probs").get<std::vector<double>>();
    }
  }
  const auto variant = policy_from_name(name);
  if (!variant) fail(ErrorCode::kConfig, "unknown policy: " + name);
  spec.variant = *variant;
  return spec;
}

struct ReplicationOutput {
  std::string csv_block;
  std::vector<double> cum_reward;       // per policy
  std::vector<double> coupled_regret;   // per policy, final; NaN when no IG
  std::vector<std::vector<std::uint32_t>> offsets;  // per policy (empty if none)
};

}  // namespace

void ExperimentConfig::validate() const {
  instance.validate();
  if (rounds < 1) fail(ErrorCode::kConfig, "rounds must be at least 1");
  if (replications < 1) fail(ErrorCode::kConfig, "replications must be at least 1");
  if (policies.empty()) fail(ErrorCode::kConfig, "at least one policy required");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      if (policies[i].variant == policies[j].variant) {
        fail(ErrorCode::kConfig, "policy list must not repeat a policy");
      }
    }
    const bool unconstrained_policy =
        policies[i].variant == PolicyVariant::kInterleavedSubmodular ||
        policies[i].variant == PolicyVariant::kIndependentSampling;
    if (unconstrained_policy &&
        instance.matroid.full_rank() != instance.arm_count()) {
      fail(ErrorCode::kConfig,
           "policies that play every chosen arm need a free matroid");
    }
  }
  if (objective && objective->size() != instance.arm_count()) {
    fail(ErrorCode::kConfig, "objective ground set must match the arm count");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.experiment_id = j.value("experiment", "experiment");
    const json& inst = j.at("instance");
    cfg.instance.means = inst.at("means").get<std::vector<double>>();
    const int k = static_cast<int>(cfg.instance.means.size());
    cfg.instance.delays = Delays(inst.at("delays").get<std::vector<int>>());
    if (inst.contains("laws")) {
      if (inst.at("laws").is_string()) {
        cfg.instance.laws.assign(k, parse_law(inst.at("laws").get<std::string>()));
      } else {
        for (const auto& l : inst.at("laws")) {
          cfg.instance.laws.push_back(parse_law(l.get<std::string>()));
        }
      }
    } else {
      cfg.instance.laws.assign(k, RewardLaw::kBernoulli);
    }
    cfg.instance.matroid = parse_matroid(inst.at("matroid"), k);
    if (inst.contains("horizon_hint")) {
      cfg.instance.horizon_hint = inst.at("horizon_hint").get<long>();
    }
    if (j.contains("objective")) {
      cfg.objective = parse_objective(j.at("objective"), cfg.instance);
    }
    for (const auto& p : j.at("policies")) cfg.policies.push_back(parse_policy(p));
    cfg.rounds = j.at("rounds").get<long>();
    cfg.replications = j.value("replications", 1);
    cfg.base_seed = j.value("seed", std::uint64_t{0});
    cfg.output_dir = j.value("output_dir", "");
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::uint64_t replication_seed(std::uint64_t base_seed, int rep) {
  return mix64(base_seed, kReplicationTag + static_cast<std::uint64_t>(rep));
}

std::string resolve_out_dir(const ExperimentConfig& cfg,
                            const std::optional<std::string>& override_dir) {
  if (override_dir && !override_dir->empty()) return *override_dir;
  if (const char* env = std::getenv("MBB_OUT_DIR")) return env;
  return cfg.output_dir.empty() ? "mbb-out" : cfg.output_dir;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::optional<std::string>& out_dir_override) {
  cfg.validate();
  const std::string out_dir = resolve_out_dir(cfg, out_dir_override);
  std::error_code fs_err;
  std::filesystem::create_directories(out_dir, fs_err);
  if (fs_err) fail(ErrorCode::kIo, "cannot create output directory: " + out_dir);

  const int n_policies = static_cast<int>(cfg.policies.size());
  int ig_index = -1;
  for (int p = 0; p < n_policies; ++p) {
    if (cfg.policies[p].variant == PolicyVariant::kInterleavedGreedy) ig_index = p;
  }

  std::vector<ReplicationOutput> reps(cfg.replications);
  parallel_for(cfg.replications, [&](int rep) {
    const std::uint64_t seed = replication_seed(cfg.base_seed, rep);
    std::vector<RunTrace> traces;
    traces.reserve(n_policies);
    for (const PolicySpec& spec : cfg.policies) {
      traces.push_back(run(spec, cfg.instance, cfg.rounds, seed, TraceDetail::kFull));
    }
    ReplicationOutput& out = reps[rep];
    out.cum_reward.resize(n_policies);
    out.coupled_regret.assign(n_policies, std::numeric_limits<double>::quiet_NaN());
    out.offsets.resize(n_policies);
    for (int p = 0; p < n_policies; ++p) {
      out.cum_reward[p] = traces[p].cum_reward;
      if (traces[p].offsets) out.offsets[p] = traces[p].offsets->u;
    }
    // Running cumulative reward and coupled regret per policy.
    std::vector<double> cum(n_policies, 0.0), regret(n_policies, 0.0);
    std::string& csv = out.csv_block;
    for (long t = 0; t < cfg.rounds; ++t) {
      for (int p = 0; p < n_policies; ++p) {
        const RunTrace& trace = traces[p];
        cum[p] += trace.round_reward[t];
        if (ig_index >= 0) {
          regret[p] += traces[ig_index].round_mean_value[t] - trace.round_mean_value[t];
        }
        csv += cfg.experiment_id;
        csv += ',';
        csv += std::to_string(rep);
        csv += ',';
        csv += policy_name(trace.policy);
        csv += ',';
        csv += std::to_string(t + 1);
        csv += ',';
        csv += format_set(trace.sampled_sets[t]);
        csv += ',';
        csv += format_set(trace.played_sets[t]);
        csv += ',';
        csv += format_double(trace.round_reward[t]);
        csv += ',';
        csv += format_double(cum[p]);
        csv += ',';
        if (ig_index >= 0) csv += format_double(regret[p]);
        csv += '\n';
      }
    }
    if (ig_index >= 0) {
      for (int p = 0; p < n_policies; ++p) out.coupled_regret[p] = regret[p];
    }
  });

  // Interleaved policies inside one replication must have consumed the same
  // offset draw.
  bool offsets_coupled = true;
  for (const ReplicationOutput& rep : reps) {
    const std::vector<std::uint32_t>* reference = nullptr;
    for (const auto& off : rep.offsets) {
      if (off.empty()) continue;
      if (reference == nullptr) {
        reference = &off;
      } else if (*reference != off) {
        offsets_coupled = false;
      }
    }
  }
  if (!offsets_coupled) {
    fail(ErrorCode::kInternal, "policies inside a replication diverged on offsets");
  }

  const std::string rows_path = out_dir + "/rows.csv";
  {
    std::ofstream rows(rows_path, std::ios::binary);
    if (!rows) fail(ErrorCode::kIo, "cannot write " + rows_path);
    rows << "experiment,replication,policy,t,sampled_set,played_set,reward,"
            "cum_reward,coupled_regret_vs_ig\n";
    for (const ReplicationOutput& rep : reps) rows << rep.csv_block;
  }

  ordered_json summary;
  summary["experiment"] = cfg.experiment_id;
  summary["rounds"] = cfg.rounds;
  summary["replications"] = cfg.replications;
  summary["base_seed"] = cfg.base_seed;
  summary["offsets_coupled"] = offsets_coupled;
  ordered_json policies = ordered_json::array();
  for (int p = 0; p < n_policies; ++p) {
    double sum = 0.0, sum_sq = 0.0, regret_sum = 0.0;
    for (const ReplicationOutput& rep : reps) {
      sum += rep.cum_reward[p];
      sum_sq += rep.cum_reward[p] * rep.cum_reward[p];
      if (ig_index >= 0) regret_sum += rep.coupled_regret[p];
    }
    const double n = static_cast<double>(cfg.replications);
    const double mean = sum / n;
    double std_error = 0.0;
    if (cfg.replications > 1) {
      const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
      std_error = std::sqrt(var / n);
    }
    ordered_json entry;
    entry["policy"] = policy_name(cfg.policies[p].variant);
    entry["mean_cum_reward"] = mean;
    entry["stderr_cum_reward"] = std_error;
    entry["mean_avg_reward"] = mean / static_cast<double>(cfg.rounds);
    if (ig_index >= 0) {
      entry["mean_coupled_regret_vs_ig"] = regret_sum / n;
    } else {
      entry["mean_coupled_regret_vs_ig"] = nullptr;
    }
    policies.push_back(std::move(entry));
  }
  summary["policies"] = std::move(policies);

  // Certificate values for instances small enough to afford them.
  long state_product = 1;
  bool dp_ok = cfg.rounds <= 2000 && cfg.instance.arm_count() <= 12;
  for (int d : cfg.instance.delays.d) {
    state_product *= d;
    if (state_product > 4096) {
      dp_ok = false;
      break;
    }
  }
  ordered_json bounds;
  if (cfg.instance.arm_count() <= 12) {
    bounds["lp_value"] = lp_upper_bound(cfg.instance, cfg.rounds);
    const SubmodularFn objective =
        cfg.objective ? *cfg.objective
                      : SubmodularFn::weighted_rank(cfg.instance.matroid,
                                                    cfg.instance.means);
    bounds["cp_value"] = cp_upper_bound(objective, cfg.instance.delays, cfg.rounds);
    bounds["dp_value"] =
        dp_ok ? ordered_json(dp_optimal(cfg.instance, cfg.rounds)) : ordered_json(nullptr);
    summary["bounds"] = std::move(bounds);
  } else {
    summary["bounds"] = nullptr;
  }

  ExperimentResult result;
  result.rows_csv_path = rows_path;
  result.summary_json_path = out_dir + "/summary.json";
  result.summary_json = summary.dump(2) + "\n";
  std::ofstream summary_file(result.summary_json_path, std::ios::binary);
  if (!summary_file) fail(ErrorCode::kIo, "cannot write " + result.summary_json_path);
  summary_file << result.summary_json;
  return result;
}

std::string bounds_report_json(
    const ExperimentConfig& cfg,
    const std::optional<std::string>& out_dir_override) {
  const std::string out_dir = resolve_out_dir(cfg, out_dir_override);
  const BoundReport report =
      compute_bounds(cfg.instance, cfg.rounds, cfg.objective);
  ordered_json j;
  j["experiment"] = cfg.experiment_id;
  j["horizon"] = report.horizon;
  j["dp_value"] = report.dp_value ? ordered_json(*report.dp_value) : ordered_json(nullptr);
  j["lp_value"] = report.lp_value ? ordered_json(*report.lp_value) : ordered_json(nullptr);
  j["cp_value"] = report.cp_value ? ordered_json(*report.cp_value) : ordered_json(nullptr);
  ordered_json rates;
  rates["dp"] = report.dp_value ? ordered_json(BoundReport::rate(report.dp_value, report.horizon)) : ordered_json(nullptr);
  rates["lp"] = report.lp_value ? ordered_json(BoundReport::rate(report.lp_value, report.horizon)) : ordered_json(nullptr);
  rates["cp"] = report.cp_value ? ordered_json(BoundReport::rate(report.cp_value, report.horizon)) : ordered_json(nullptr);
  j["per_round"] = std::move(rates);
  ordered_json slack;
  slack["d_max"] = report.d_max;
  slack["matroid_rank"] = report.matroid_rank;
  slack["full_set_value"] = report.full_set_value;
  j["additive_slack"] = std::move(slack);
  if (report.dp_value && report.lp_value) {
    const double scale =
       1.0 - static_cast<double>(report.d_max - 1) /
                  static_cast<double>(report.d_max - 1 + report.horizon);
    j["lp_dp_consistent"] = *report.lp_value >= scale * *report.dp_value - 1e-8;
  } else {
    j["lp_dp_consistent"] = nullptr;
  }
  if (report.gaps) {
    ordered_json gaps;
    gaps["order"] = report.gaps->order;
    gaps["sorted_means"] = report.gaps->sorted_means;
    gaps["log_horizon"] = report.gaps->log_horizon;
    gaps["gap_dependent_bound"] = report.gaps->gap_dependent_bound;
    ordered_json thresholds = ordered_json::array();
    for (int i = 0; i < report.gaps->arms(); ++i) {
      thresholds.push_back(report.gaps->threshold[i]);
    }
    gaps["thresholds"] = std::move(thresholds);
    j["gap_table"] = std::move(gaps);
  } else {
    j["gap_table"] = nullptr;
  }

  const std::string text = j.dump(2) + "\n";
  {
    std::error_code fs_err;
    std::filesystem::create_directories(out_dir, fs_err);
    if (fs_err) fail(ErrorCode::kIo, "cannot create output directory: " + out_dir);
    std::ofstream json_file(out_dir + "/bounds.json", std::ios::binary);
    json_file << text;
    std::ofstream csv(out_dir + "/bounds.csv", std::ios::binary);
    csv << "bound,value,per_round\n";
    if (report.dp_value) {
      csv << "dp," << format_double(*report.dp_value) << ','
          << format_double(BoundReport::rate(report.dp_value, report.horizon)) << '\n';
    }
    if (report.lp_value) {
      csv << "lp," << format_double(*report.lp_value) << ','
          << format_double(BoundReport::rate(report.lp_value, report.horizon)) << '\n';
    }
    if (report.cp_value) {
      csv << "cp," << format_double(*report.cp_value) << ','
          << format_double(BoundReport::rate(report.cp_value, report.horizon)) << '\n';
    }
  }
  return text;
}

std::string check_schedule_csv(const Delays& delays, std::uint64_t seed,
                               long rounds) {
  if (rounds < 1) fail(ErrorCode::kInvalidArgument, "at least one round required");
  // Same offset sub-stream as a policy run with this seed.
  Rng offset_rng(mix64(seed, 1));
  const OffsetVector off = sample_offsets(delays, offset_rng);
  std::string csv = "t,selected\n";
  std::vector<int> selected;
  for (long t = 0; t < rounds; ++t) {
    sampled_set_into(off, delays, t, selected);
    csv += std::to_string(t + 1);
    csv += ',';
    csv += format_set(selected);
    csv += '\n';
  }
  return csv;
}

}  // namespace mbb
