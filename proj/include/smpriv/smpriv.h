// Copyright 2026 The smpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to smpriv.
 *
 * Every object is an opaque handle created by an smp_*_create / compute /
 * parse call and released by the matching smp_*_free (which accept NULL).
 * Fallible calls return an smp_status; on failure smp_last_error() holds a
 * message for the calling thread until its next failing call. Strings
 * returned through `char**` are heap-allocated and owned by the caller,
 * who releases them with smp_string_free.
 *
 * Indices are 0-based. Counts that can exceed 64 bits are returned as
 * decimal strings.
 */
#ifndef SMPRIV_SMPRIV_H
#define SMPRIV_SMPRIV_H

#include <stddef.h>
#include <stdint.h>

#if defined(SMP_BUILDING_LIBRARY)
#define SMP_API __attribute__((visibility("default")))
#else
#define SMP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smp_status {
  SMP_OK = 0,
  SMP_ERR_INVALID_ARGUMENT = 1, /* null pointer, index out of range */
  SMP_ERR_PARSE = 2,            /* malformed text input */
  SMP_ERR_INVALID_DATA = 3,     /* well-formed input violating a precondition */
  SMP_ERR_NO_SOLUTIONS = 4,     /* target total unreachable */
  SMP_ERR_GUARD_EXCEEDED = 5,   /* memory or time budget exhausted */
  SMP_ERR_INCOMPLETE = 6,       /* joint search stopped at its work limit */
  SMP_ERR_IO = 7,
  SMP_ERR_INTERNAL = 8
} smp_status;

typedef enum smp_format { SMP_FORMAT_CSV = 0, SMP_FORMAT_MARKDOWN = 1 } smp_format;

typedef enum smp_family { SMP_FAMILY_EXPONENTIAL = 0, SMP_FAMILY_NORMAL = 1 } smp_family;

/* Exponential uses `mean` only; normal uses `mean` and `sd`. Wh. */
typedef struct smp_distribution {
  smp_family family;
  double mean;
  double sd;
} smp_distribution;

typedef struct smp_guards {
  uint64_t memory_bytes;
  uint64_t time_ms;
} smp_guards;

typedef struct smp_fit {
  smp_distribution spec;
  double cvm;
} smp_fit;

typedef struct smp_matrix smp_matrix;
typedef struct smp_instance smp_instance;
typedef struct smp_permutations smp_permutations;
typedef struct smp_marginals smp_marginals;
typedef struct smp_report smp_report;
typedef struct smp_joint smp_joint;
typedef struct smp_config smp_config;
typedef struct smp_table smp_table;

SMP_API const char* smp_version(void);
SMP_API const char* smp_status_name(smp_status status);
SMP_API const char* smp_last_error(void);
SMP_API void smp_string_free(char* s);

/* 4 GiB of count tables, 10 minutes. */
SMP_API smp_guards smp_default_guards(void);

/* ---- readings ---------------------------------------------------------- */

SMP_API smp_status smp_matrix_create(size_t meters, size_t periods, const int64_t* row_major,
                                     smp_matrix** out);
/* Header `meter_id,period,wh` or `meter_id,period,kwh`. */
SMP_API smp_status smp_matrix_parse_csv(const char* text, smp_matrix** out);
SMP_API smp_status smp_matrix_write_csv(const smp_matrix* m, char** out);
/* Meter 0 from `target`, the rest from `others`; rounded to whole Wh. */
SMP_API smp_status smp_matrix_sample(size_t meters, size_t periods, smp_distribution target,
                                     smp_distribution others, uint64_t seed, smp_matrix** out);
SMP_API smp_status smp_matrix_select(const smp_matrix* m, size_t meters, size_t periods,
                                     uint64_t seed, smp_matrix** out);
SMP_API size_t smp_matrix_meters(const smp_matrix* m);
SMP_API size_t smp_matrix_periods(const smp_matrix* m);
SMP_API smp_status smp_matrix_reading(const smp_matrix* m, size_t meter, size_t period,
                                      int64_t* out);
SMP_API smp_status smp_matrix_total(const smp_matrix* m, size_t meter, int64_t* out);
SMP_API void smp_matrix_free(smp_matrix* m);

/* ---- anonymized instances ---------------------------------------------- */

/* `perms` may be NULL when the secret shuffles are not wanted. */
SMP_API smp_status smp_anonymize(const smp_matrix* m, uint64_t seed, smp_instance** inst,
                                 smp_permutations** perms);
SMP_API smp_status smp_instance_create(size_t meters, size_t periods, const int64_t* values,
                                       const int64_t* totals, smp_instance** out);
SMP_API smp_status smp_instance_parse(const char* text, smp_instance** out);
SMP_API smp_status smp_instance_write(const smp_instance* inst, char** out);
/* The built-in 3-meter, 9-period example. */
SMP_API smp_status smp_instance_example(smp_instance** out);
SMP_API size_t smp_instance_meters(const smp_instance* inst);
SMP_API size_t smp_instance_periods(const smp_instance* inst);
SMP_API smp_status smp_instance_value(const smp_instance* inst, size_t period, size_t position,
                                      int64_t* out);
SMP_API smp_status smp_instance_total(const smp_instance* inst, size_t meter, int64_t* out);
SMP_API void smp_instance_free(smp_instance* inst);

SMP_API smp_status smp_permutations_position(const smp_permutations* p, size_t period,
                                             size_t meter, size_t* out);
SMP_API smp_status smp_permutations_write(const smp_permutations* p, char** out);
SMP_API void smp_permutations_free(smp_permutations* p);

/* ---- relaxed attack on one meter --------------------------------------- */

/* Number of selections (one reading per period) summing to target_total. */
SMP_API smp_status smp_count_solutions(const smp_instance* inst, int64_t target_total,
                                       const smp_guards* guards, char** decimal);
/* SMP_ERR_NO_SOLUTIONS when the meter's total is unreachable. `guards`
 * may be NULL for the defaults. */
SMP_API smp_status smp_marginals_compute(const smp_instance* inst, size_t target_meter,
                                         const smp_guards* guards, smp_marginals** out);
SMP_API smp_status smp_marginals_total(const smp_marginals* mc, char** decimal);
SMP_API smp_status smp_marginals_count(const smp_marginals* mc, size_t period, size_t position,
                                       char** decimal);
SMP_API smp_status smp_marginals_probability(const smp_marginals* mc, size_t period,
                                             size_t position, double* out);
SMP_API void smp_marginals_free(smp_marginals* mc);

SMP_API smp_status smp_report_compute(const smp_marginals* mc, smp_report** out);
SMP_API size_t smp_report_periods(const smp_report* r);
SMP_API smp_status smp_report_period_entropy(const smp_report* r, size_t period, double* out);
SMP_API double smp_report_average(const smp_report* r);
SMP_API double smp_report_max_entropy(const smp_report* r);
SMP_API smp_status smp_report_render(const smp_report* r, smp_format format,
                                     double reveal_threshold, char** out);
SMP_API void smp_report_free(smp_report* r);

/* Writes up to `limit` selections, lexicographically ordered, into
 * `positions` (row-major, limit x periods entries; may be NULL). */
SMP_API smp_status smp_enumerate(const smp_instance* inst, size_t target_meter, size_t limit,
                                 const smp_guards* guards, size_t* positions, size_t* emitted,
                                 int* truncated);
SMP_API smp_status smp_enumerate_render(const smp_instance* inst, size_t target_meter,
                                        size_t limit, const smp_guards* guards, char** out);

/* ---- joint attack on all meters ---------------------------------------- */

/* `work_limit` caps placements tried; 0 selects the default. */
SMP_API smp_status smp_joint_solve(const smp_instance* inst, uint64_t work_limit,
                                   smp_joint** out);
SMP_API size_t smp_joint_count(const smp_joint* j);
SMP_API int smp_joint_exhausted(const smp_joint* j);
SMP_API smp_status smp_joint_raw_count(const smp_joint* j, char** decimal);
SMP_API smp_status smp_joint_value(const smp_joint* j, size_t solution, size_t meter,
                                   size_t period, int64_t* out);
/* SMP_ERR_INCOMPLETE if the search stopped early. */
SMP_API smp_status smp_joint_agreed(const smp_joint* j, size_t meter, size_t period,
                                    int* agreed, int64_t* value);
SMP_API smp_status smp_joint_render(const smp_joint* j, char** out);
SMP_API void smp_joint_free(smp_joint* j);

/* ---- distribution fitting ---------------------------------------------- */

SMP_API smp_status smp_cvm(const double* samples, size_t count, smp_distribution spec,
                           double* out);
/* Fits every family, best W^2 first. `fits` must hold 2 entries. */
SMP_API smp_status smp_fit_rank(const double* samples, size_t count, smp_fit* fits,
                                size_t* fit_count);
SMP_API smp_status smp_fit_render(const double* samples, size_t count, smp_format format,
                                  char** out);

/* ---- experiments -------------------------------------------------------- */

SMP_API smp_status smp_config_create(smp_config** out);
/* key=value lines, '#' comments. */
SMP_API smp_status smp_config_parse(smp_config* c, const char* text);
SMP_API smp_status smp_config_set(smp_config* c, const char* key, const char* value);
SMP_API smp_format smp_config_format(const smp_config* c);
/* SMP_ERR_INVALID_DATA when the settings cannot describe a run. */
SMP_API smp_status smp_config_validate(const smp_config* c);
/* Byte count with optional K/M/G suffix, as accepted by `mem_budget`. */
SMP_API smp_status smp_parse_bytes(const char* text, uint64_t* out);
SMP_API void smp_config_free(smp_config* c);

SMP_API smp_status smp_experiment_run(const smp_config* c, smp_table** out);
SMP_API smp_status smp_table_emit(const smp_table* t, smp_format format, char** out);
SMP_API smp_status smp_table_emit_repetitions(const smp_table* t, char** out);
SMP_API int smp_table_infeasible(const smp_table* t);
SMP_API smp_status smp_table_cell(const smp_table* t, size_t periods, size_t meters,
                                  double* mean, double* stddev, size_t* completed,
                                  int* infeasible);
SMP_API void smp_table_free(smp_table* t);

/* Markdown walk-through of the built-in example. */
SMP_API smp_status smp_example_report(char** out);

#ifdef __cplusplus
}
#endif

#endif /* SMPRIV_SMPRIV_H */
