/* Copyright 2025 The Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the blocking-bandit toolkit. Handles are opaque; every function
 * returns a status code and leaves a thread-local message readable through
 * mbb_last_error(). Strings returned through char** outputs are owned by the
 * caller and released with mbb_string_free().
 */

#ifndef MBB_MBB_H_
#define MBB_MBB_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mbb_status {
  MBB_OK = 0,
  MBB_ERR_INVALID_ARGUMENT = 1,
  MBB_ERR_OUT_OF_RANGE = 2,
  MBB_ERR_TOO_LARGE = 3,
  MBB_ERR_PROTOCOL = 4,
  MBB_ERR_CONFIG = 5,
  MBB_ERR_IO = 6,
  MBB_ERR_UNKNOWN_NAME = 7,
  MBB_ERR_ACCEPTANCE = 8,
  MBB_ERR_INTERNAL = 9
} mbb_status;

typedef struct mbb_matroid mbb_matroid;
typedef struct mbb_submodular mbb_submodular;

const char* mbb_version(void);

/* Message of the most recent failure on this thread; empty when none. */
const char* mbb_last_error(void);

void mbb_string_free(char* s);

/* ---- matroids ---- */

mbb_status mbb_matroid_uniform(int32_t k, int32_t rank, mbb_matroid** out);
/* block_of[e] gives the block index of element e; capacities has n_blocks
 * entries. */
mbb_status mbb_matroid_partition(int32_t k, const int32_t* block_of,
                                 const int32_t* capacities, int32_t n_blocks,
                                 mbb_matroid** out);
/* endpoints holds 2*n_edges vertex ids (u0, v0, u1, v1, ...). */
mbb_status mbb_matroid_graphic(int32_t n_vertices, const int32_t* endpoints,
                               int32_t n_edges, mbb_matroid** out);
/* independent_masks lists the family as subset bitmasks. */
mbb_status mbb_matroid_explicit(int32_t k, const uint32_t* independent_masks,
                                int32_t n_masks, int32_t validate,
                                mbb_matroid** out);
void mbb_matroid_free(mbb_matroid* m);

mbb_status mbb_matroid_is_independent(const mbb_matroid* m,
                                      const int32_t* elements, int32_t n,
                                      int32_t* out);
mbb_status mbb_matroid_rank(const mbb_matroid* m, const int32_t* elements,
                            int32_t n, int32_t* out);
mbb_status mbb_matroid_restrict(const mbb_matroid* m, const int32_t* elements,
                                int32_t n, mbb_matroid** out);
/* weights has one entry per ground element; the basis is written to out_buf
 * (capacity buf_len) and its size to out_n. */
mbb_status mbb_matroid_max_weight_basis(const mbb_matroid* m,
                                        const int32_t* candidates, int32_t n,
                                        const double* weights, int32_t* out_buf,
                                        int32_t buf_len, int32_t* out_n);

/* ---- submodular functions ---- */

mbb_status mbb_submodular_budget_additive(int32_t k, int32_t budget,
                                          mbb_submodular** out);
mbb_status mbb_submodular_weighted_rank(const mbb_matroid* m,
                                        const double* weights,
                                        mbb_submodular** out);
/* table holds 2^k values indexed by subset bitmask. */
mbb_status mbb_submodular_explicit(int32_t k, const double* table,
                                   mbb_submodular** out);
void mbb_submodular_free(mbb_submodular* f);

mbb_status mbb_submodular_eval(const mbb_submodular* f, const int32_t* elements,
                               int32_t n, double* out);
mbb_status mbb_submodular_multilinear(const mbb_submodular* f, const double* x,
                                      double* out);
mbb_status mbb_submodular_concave_closure(const mbb_submodular* f,
                                          const double* x, double* out);

/* ---- interleaved schedule ---- */

/* Exact membership test of the half-open interval
 * [round/delay + offset/2^32, (round+1)/delay + offset/2^32) at an integer. */
mbb_status mbb_schedule_contains_integer(uint32_t offset, int32_t delay,
                                         int64_t round, int32_t* out);

/* Per-round sampled sets as CSV text (columns t,selected). */
mbb_status mbb_check_schedule(const int32_t* delays, int32_t k, uint64_t seed,
                              int64_t rounds, char** csv_out);

/* ---- experiments ---- */

/* Runs the experiment described by a JSON config file. out_dir,
 * seed_override and policy_override may be NULL; policy_override is a
 * comma-separated policy list (is,ig,ib,greedy,indep) replacing the config's
 * list. The summary JSON is returned. */
mbb_status mbb_run_experiment(const char* config_path, const char* out_dir,
                              const uint64_t* seed_override,
                              const char* policy_override,
                              char** summary_json_out);

/* Runs a named reproduction and returns its JSON report. Returns
 * MBB_ERR_ACCEPTANCE when the reproduction ran but missed its target (the
 * report is still returned). */
mbb_status mbb_reproduce(const char* name, char** report_json_out);

/* Bound certificates for the instance of a config file; writes
 * bounds.json/bounds.csv into out_dir unless it is NULL. */
mbb_status mbb_bounds(const char* config_path, const char* out_dir,
                      char** report_json_out);

#ifdef __cplusplus
}
#endif

#endif /* MBB_MBB_H_ */
