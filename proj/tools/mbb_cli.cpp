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

// Command-line front end; talks to the shared library through the C API
// only.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbb/mbb.h"

namespace {

// 0 ok, 1 config/usage error, 2 acceptance failure, 3 internal violation.
int exit_code_of(mbb_status status) {
  switch (status) {
    case MBB_OK:
      return 0;
    case MBB_ERR_ACCEPTANCE:
      return 2;
    case MBB_ERR_PROTOCOL:
    case MBB_ERR_INTERNAL:
      return 3;
    default:
      return 1;
  }
}

int report_failure(mbb_status status) {
  std::fprintf(stderr, "error: %s\n", mbb_last_error());
  return exit_code_of(status);
}

int run_simulate(const std::string& config, const std::string& out_dir,
                 bool has_seed, std::uint64_t seed,
                 const std::vector<std::string>& policies) {
  std::string policy_csv;
  for (const std::string& p : policies) {
    if (!policy_csv.empty()) policy_csv.push_back(',');
    policy_csv += p;
  }
  char* summary = nullptr;
  const mbb_status status = mbb_run_experiment(
      config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
      has_seed ? &seed : nullptr,
      policy_csv.empty() ? nullptr : policy_csv.c_str(), &summary);
  if (status != MBB_OK) return report_failure(status);
  std::fputs(summary, stdout);
  mbb_string_free(summary);
  return 0;
}

int run_reproduce(const std::string& name) {
  char* report_json = nullptr;
  const mbb_status status = mbb_reproduce(name.c_str(), &report_json);
  if (report_json == nullptr) return report_failure(status);

  nlohmann::json report;
  try {
    report = nlohmann::json::parse(report_json);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: malformed report: %s\n", e.what());
    mbb_string_free(report_json);
    return 3;
  }
  mbb_string_free(report_json);
  for (const auto& check : report.at("checks")) {
    std::printf("%s: %s  measured=%.10g target=%.10g tolerance=%.3g\n",
                check.at("pass").get<bool>() ? "PASS" : "FAIL",
                check.at("label").get<std::string>().c_str(),
                check.at("measured").get<double>(),
                check.at("target").get<double>(),
                check.at("tolerance").get<double>());
  }
  std::printf("%s: %s\n", report.at("name").get<std::string>().c_str(),
              report.at("pass").get<bool>() ? "PASS" : "FAIL");
  return exit_code_of(status);
}

int run_bounds(const std::string& config, const std::string& out_dir) {
  char* report = nullptr;
  const mbb_status status = mbb_bounds(
      config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &report);
  if (status != MBB_OK) return report_failure(status);
  std::fputs(report, stdout);
  mbb_string_free(report);
  return 0;
}

int run_check_schedule(const std::string& delays_arg, std::uint64_t seed,
                       long long rounds) {
  std::vector<std::int32_t> delays;
  std::string token;
  for (char c : delays_arg + ",") {
    if (c == ',') {
      if (!token.empty()) delays.push_back(std::atoi(token.c_str()));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  char* csv = nullptr;
  const mbb_status status = mbb_check_schedule(
      delays.data(), static_cast<std::int32_t>(delays.size()), seed, rounds, &csv);
  if (status != MBB_OK) return report_failure(status);
  std::fputs(csv, stdout);
  mbb_string_free(csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocking-bandit simulator and bound toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, reproduce_name, delays_arg;
  std::vector<std::string> policies;
  std::uint64_t seed = 0;
  bool has_seed = false;
  long long rounds = 100;

  CLI::App* simulate = app.add_subcommand("simulate", "Run an experiment config");
  simulate->add_option("--config", config_path, "JSON config file")->required();
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--seed", seed, "Base seed override")
      ->each([&](const std::string&) { has_seed = true; });
  simulate->add_option("--policy", policies,
                       "Policy override (is, ig, ib, greedy, indep); repeatable");

  CLI::App* repro = app.add_subcommand("reproduce", "Run a canonical fixture");
  repro->add_option("name", reproduce_name, "Fixture name")->required();

  CLI::App* bounds = app.add_subcommand("bounds", "Emit bound certificates");
  bounds->add_option("--config", config_path, "JSON config file")->required();
  bounds->add_option("--out", out_dir, "Output directory for bounds.json/csv");

  CLI::App* sched = app.add_subcommand("check-schedule",
                                       "Dump interleaved sampled sets as CSV");
  sched->add_option("--delays", delays_arg, "Comma-separated delays")->required();
  sched->add_option("--seed", seed, "Offset seed");
  sched->add_option("--rounds", rounds, "Rounds to dump");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    return run_simulate(config_path, out_dir, has_seed, seed, policies);
  }
  if (repro->parsed()) return run_reproduce(reproduce_name);
  if (bounds->parsed()) return run_bounds(config_path, out_dir);
  if (sched->parsed()) return run_check_schedule(delays_arg, seed, rounds);
  return 1;
}
