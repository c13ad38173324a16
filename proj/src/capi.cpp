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

#include "mbb/mbb.h"

#include <cstring>
#include <optional>
#include <new>
#include <string>
#include <vector>

#include "mbb/error.hpp"
#include "mbb/experiment.hpp"
#include "mbb/matroid.hpp"
#include "mbb/policies.hpp"
#include "mbb/schedule.hpp"
#include "mbb/submodular.hpp"

struct mbb_matroid {
  mbb::Matroid value;
};

struct mbb_submodular {
  mbb::SubmodularFn value;
};

namespace {

thread_local std::string g_last_error;

mbb_status status_of(mbb::ErrorCode code) {
  switch (code) {
    case mbb::ErrorCode::kInvalidArgument: return MBB_ERR_INVALID_ARGUMENT;
    case mbb::ErrorCode::kOutOfRange: return MBB_ERR_OUT_OF_RANGE;
    case mbb::ErrorCode::kTooLarge: return MBB_ERR_TOO_LARGE;
    case mbb::ErrorCode::kProtocolViolation: return MBB_ERR_PROTOCOL;
    case mbb::ErrorCode::kConfig: return MBB_ERR_CONFIG;
    case mbb::ErrorCode::kIo: return MBB_ERR_IO;
    case mbb::ErrorCode::kUnknownName: return MBB_ERR_UNKNOWN_NAME;
    case mbb::ErrorCode::kInternal: return MBB_ERR_INTERNAL;
  }
  return MBB_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes and the thread-local
// error message.
template <typename Fn>
mbb_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return MBB_OK;
  } catch (const mbb::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MBB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MBB_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<int> to_vector(const int32_t* data, int32_t n) {
  if (n < 0) mbb::fail(mbb::ErrorCode::kInvalidArgument, "negative length");
  if (n > 0 && data == nullptr) {
    mbb::fail(mbb::ErrorCode::kInvalidArgument, "null array with positive length");
  }
  return std::vector<int>(data, data + n);
}

void require(bool ok, const char* what) {
  if (!ok) mbb::fail(mbb::ErrorCode::kInvalidArgument, what);
}

}  // namespace

extern "C" {

const char* mbb_version(void) { return "1.0.0"; }

const char* mbb_last_error(void) { return g_last_error.c_str(); }

void mbb_string_free(char* s) { delete[] s; }

mbb_status mbb_matroid_uniform(int32_t k, int32_t rank, mbb_matroid** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new mbb_matroid{mbb::Matroid::uniform(k, rank)};
  });
}

mbb_status mbb_matroid_partition(int32_t k, const int32_t* block_of,
                                 const int32_t* capacities, int32_t n_blocks,
                                 mbb_matroid** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(k >= 0 && n_blocks >= 0, "negative sizes");
    require(k == 0 || block_of != nullptr, "null block assignment");
    require(n_blocks == 0 || capacities != nullptr, "null capacities");
    std::vector<std::vector<int>> blocks(n_blocks);
    for (int32_t e = 0; e < k; ++e) {
      require(block_of[e] >= 0 && block_of[e] < n_blocks, "block index out of range");
      blocks[block_of[e]].push_back(e);
    }
    *out = new mbb_matroid{mbb::Matroid::partition(
        std::move(blocks), std::vector<int>(capacities, capacities + n_blocks))};
  });
}

mbb_status mbb_matroid_graphic(int32_t n_vertices, const int32_t* endpoints,
                               int32_t n_edges, mbb_matroid** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(n_edges >= 0, "negative edge count");
    require(n_edges == 0 || endpoints != nullptr, "null endpoint array");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n_edges);
    for (int32_t e = 0; e < n_edges; ++e) {
      edges.emplace_back(endpoints[2 * e], endpoints[2 * e + 1]);
    }
    *out = new mbb_matroid{mbb::Matroid::graphic(n_vertices, std::move(edges))};
  });
}

mbb_status mbb_matroid_explicit(int32_t k, const uint32_t* independent_masks,
                                int32_t n_masks, int32_t validate,
                                mbb_matroid** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(k >= 0 && k < 31, "ground set too large");
    require(n_masks >= 0, "negative mask count");
    require(n_masks == 0 || independent_masks != nullptr, "null mask array");
    std::vector<bool> table(std::size_t{1} << k, false);
    for (int32_t i = 0; i < n_masks; ++i) {
      require(independent_masks[i] < (std::uint32_t{1} << k), "mask out of range");
      table[independent_masks[i]] = true;
    }
    *out = new mbb_matroid{
        mbb::Matroid::explicit_masks(k, std::move(table), validate != 0)};
  });
}

void mbb_matroid_free(mbb_matroid* m) { delete m; }

mbb_status mbb_matroid_is_independent(const mbb_matroid* m,
                                      const int32_t* elements, int32_t n,
                                      int32_t* out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null argument");
    *out = m->value.is_independent(to_vector(elements, n)) ? 1 : 0;
  });
}

mbb_status mbb_matroid_rank(const mbb_matroid* m, const int32_t* elements,
                            int32_t n, int32_t* out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null argument");
    *out = m->value.rank(to_vector(elements, n));
  });
}

mbb_status mbb_matroid_restrict(const mbb_matroid* m, const int32_t* elements,
                                int32_t n, mbb_matroid** out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null argument");
    *out = new mbb_matroid{m->value.restricted(to_vector(elements, n))};
  });
}

mbb_status mbb_matroid_max_weight_basis(const mbb_matroid* m,
                                        const int32_t* candidates, int32_t n,
                                        const double* weights, int32_t* out_buf,
                                        int32_t buf_len, int32_t* out_n) {
  return guarded([&] {
    require(m != nullptr && weights != nullptr && out_n != nullptr, "null argument");
    const std::vector<int> basis = m->value.max_weight_independent_set(
        to_vector(candidates, n),
        std::span<const double>(weights, m->value.size()));
    require(static_cast<int32_t>(basis.size()) <= buf_len || out_buf == nullptr,
            "output buffer too small");
    if (out_buf != nullptr) {
      for (std::size_t i = 0; i < basis.size(); ++i) {
        out_buf[i] = basis[i];
      }
    }
    *out_n = static_cast<int32_t>(basis.size());
  });
}

mbb_status mbb_submodular_budget_additive(int32_t k, int32_t budget,
                                          mbb_submodular** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new mbb_submodular{mbb::SubmodularFn::budget_additive(k, budget)};
  });
}

mbb_status mbb_submodular_weighted_rank(const mbb_matroid* m,
                                        const double* weights,
                                        mbb_submodular** out) {
  return guarded([&] {
    require(m != nullptr && weights != nullptr && out != nullptr, "null argument");
    *out = new mbb_submodular{mbb::SubmodularFn::weighted_rank(
        m->value, std::vector<double>(weights, weights + m->value.size()))};
  });
}

mbb_status mbb_submodular_explicit(int32_t k, const double* table,
                                   mbb_submodular** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(k >= 0 && k < 31, "ground set too large");
    require(table != nullptr, "null table");
    *out = new mbb_submodular{mbb::SubmodularFn::explicit_table(
        k, std::vector<double>(table, table + (std::size_t{1} << k)))};
  });
}

void mbb_submodular_free(mbb_submodular* f) { delete f; }

mbb_status mbb_submodular_eval(const mbb_submodular* f, const int32_t* elements,
                               int32_t n, double* out) {
  return guarded([&] {
    require(f != nullptr && out != nullptr, "null argument");
    *out = f->value.eval(to_vector(elements, n));
  });
}

mbb_status mbb_submodular_multilinear(const mbb_submodular* f, const double* x,
                                      double* out) {
  return guarded([&] {
    require(f != nullptr && x != nullptr && out != nullptr, "null argument");
    *out = f->value.multilinear_exact(
        std::span<const double>(x, f->value.size()));
  });
}

mbb_status mbb_submodular_concave_closure(const mbb_submodular* f,
                                          const double* x, double* out) {
  return guarded([&] {
    require(f != nullptr && x != nullptr && out != nullptr, "null argument");
    *out = f->value.concave_closure(std::span<const double>(x, f->value.size()));
  });
}

mbb_status mbb_schedule_contains_integer(uint32_t offset, int32_t delay,
                                         int64_t round, int32_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = mbb::contains_integer(offset, delay, round) ? 1 : 0;
  });
}

mbb_status mbb_check_schedule(const int32_t* delays, int32_t k, uint64_t seed,
                              int64_t rounds, char** csv_out) {
  return guarded([&] {
    require(csv_out != nullptr, "null output");
    require(k > 0 && delays != nullptr, "delays required");
    *csv_out = copy_string(mbb::check_schedule_csv(
        mbb::Delays(std::vector<int>(delays, delays + k)), seed, rounds));
  });
}

mbb_status mbb_run_experiment(const char* config_path, const char* out_dir,
                              const uint64_t* seed_override,
                              const char* policy_override,
                              char** summary_json_out) {
  return guarded([&] {
    require(config_path != nullptr, "null config path");
    mbb::ExperimentConfig cfg = mbb::load_config(config_path);
    std::optional<std::string> out_override;
    if (out_dir != nullptr) out_override = out_dir;
    if (seed_override != nullptr) cfg.base_seed = *seed_override;
    if (policy_override != nullptr) {
      cfg.policies.clear();
      std::string token;
      for (const char* p = policy_override;; ++p) {
        if (*p == ',' || *p == '\0') {
          if (!token.empty()) {
            const auto variant = mbb::policy_from_name(token);
            if (!variant) {
              mbb::fail(mbb::ErrorCode::kConfig, "unknown policy: " + token);
            }
            cfg.policies.push_back({*variant});
            token.clear();
          }
          if (*p == '\0') break;
        } else {
          token.push_back(*p);
        }
      }
      cfg.validate();
    }
    const mbb::ExperimentResult result = mbb::run_experiment(cfg, out_override);
    if (summary_json_out != nullptr) {
      *summary_json_out = copy_string(result.summary_json);
    }
  });
}

mbb_status mbb_reproduce(const char* name, char** report_json_out) {
  bool passed = false;
  const mbb_status status = guarded([&] {
    require(name != nullptr, "null reproduction name");
    const mbb::ReproduceReport report = mbb::reproduce(name);
    passed = report.pass;
    if (report_json_out != nullptr) {
      *report_json_out = copy_string(report.to_json());
    }
  });
  if (status != MBB_OK) return status;
  if (!passed) {
    g_last_error = "reproduction missed its target";
    return MBB_ERR_ACCEPTANCE;
  }
  return MBB_OK;
}

mbb_status mbb_bounds(const char* config_path, const char* out_dir,
                      char** report_json_out) {
  return guarded([&] {
    require(config_path != nullptr, "null config path");
    const mbb::ExperimentConfig cfg = mbb::load_config(config_path);
    std::optional<std::string> out_override;
    if (out_dir != nullptr) out_override = out_dir;
    const std::string json = mbb::bounds_report_json(cfg, out_override);
    if (report_json_out != nullptr) *report_json_out = copy_string(json);
  });
}

}  // extern "C"
