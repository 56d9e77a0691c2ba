/* Copyright 2026 the derand authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the derand shared library: randomized branching programs,
 * their low-randomness simulation, seeded extractors, pseudorandom
 * generators, the GIP coin generator, and the experiment runner.
 *
 * Conventions: functions return drd_status; every non-OK status leaves a
 * human-readable message in drd_last_error() (thread-local). Output strings
 * are heap-allocated and released with drd_string_free(); programs are opaque
 * handles released with drd_program_free(). Bit strings are '0'/'1' text.
 */

#ifndef DERAND_H
#define DERAND_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef DRD_API
#define DRD_API __attribute__((visibility("default")))
#endif

typedef enum drd_status {
  DRD_OK = 0,
  DRD_E_INVALID = 1,    /* bad operand */
  DRD_E_PARSE = 2,      /* malformed input text */
  DRD_E_VALIDATION = 3, /* structural violation (cycle, dangling edge, ...) */
  DRD_E_RESOURCE = 4,   /* enumeration cap exceeded */
  DRD_E_CONFIG = 5,     /* inconsistent configuration */
  DRD_E_DIVERGENCE = 6, /* non-absorbing chain / iteration cap */
  DRD_E_CHECK = 7,      /* experiment-level check failed */
  DRD_E_INTERNAL = 8
} drd_status;

typedef struct drd_program drd_program;

DRD_API const char* drd_version(void);
DRD_API const char* drd_last_error(void);
DRD_API void drd_string_free(char* s);
DRD_API void drd_program_free(drd_program* p);

/* -- branching programs --------------------------------------------------- */

/* Parses BP text format v1 or its JSON mirror. */
DRD_API drd_status drd_program_parse(const char* text, drd_program** out);
/* spec_json keys: n, m, width, depth, discipline, terminals, fresh. */
DRD_API drd_status drd_program_random(const char* spec_json, uint64_t seed, drd_program** out);
DRD_API drd_status drd_program_serialize(const drd_program* p, char** out_text);
DRD_API drd_status drd_program_to_json(const drd_program* p, char** out_json);
/* {n, m, size, length, queries, start?, accept?} */
DRD_API drd_status drd_program_info(const drd_program* p, char** out_json);
/* discipline: "R-OW" | "S-OW" | "S-R" | "unrestricted" */
DRD_API drd_status drd_program_validate(const drd_program* p, const char* discipline, int* out_ok);
DRD_API drd_status drd_program_eval(const drd_program* p, uint32_t v0, const char* x_bits,
                                    const char* y_bits, uint32_t* out_vertex);
DRD_API drd_status drd_program_compute(const drd_program* p, const char* x_bits, const char* y_bits,
                                       int* out_bit);
/* allowed: 1-based input indices kept readable. */
DRD_API drd_status drd_program_restrict(const drd_program* p, const int* allowed, size_t count,
                                        drd_program** out);
/* truth_bits: 2^n bits, index = x as a binary numeral. Result "num/den". */
DRD_API drd_status drd_program_failure_probability(const drd_program* p, const char* truth_bits,
                                                   uint64_t eval_cap, char** out_rational);

/* -- distributions ---------------------------------------------------------- */

/* JSON map {vertex id: probability}; exact rational strings, or decimal when
 * as_float is nonzero. */
DRD_API drd_status drd_exact_distribution(const drd_program* p, uint32_t v0, const char* x_bits,
                                          uint64_t cap, int as_float, char** out_json);

/* -- simulation ------------------------------------------------------------- */

/* mode: "A" | "H1" | "H2" | "H3" | "SOW" | "SOW-H1" | "SOW-H2".
 * options_json keys (all optional): trials, master_seed, c, T, r, block,
 * threshold, prg_eps, prg_block, ext_d, ext_eps, v0, float, exact_law.
 * Returns {distribution, trace_summary, bits_consumed, direct, resolved}. */
DRD_API drd_status drd_simulate(const drd_program* p, const char* x_bits, const char* mode,
                                const char* options_json, char** out_json);

/* -- extractors ------------------------------------------------------------- */

/* options_json keys: kind (hash|walk|guv), ell, d, s, k, eps, alpha,
 * exhaustive, family_count, family_seed, vsize, functions.
 * Returns {params, verified, badset_count, bound, ...}. */
DRD_API drd_status drd_extractor_test(const char* options_json, char** out_json);
/* One extractor evaluation; options as above. */
DRD_API drd_status drd_extract(const char* options_json, const char* x_bits, const char* y_bits,
                               char** out_bits);

/* -- pseudorandom generators ------------------------------------------------ */

/* kind: "nisan" | "nz"; options_json keys: space, eps, block, source_len,
 * seed_block, out_block, k. seed_hex supplies the seed bits. */
DRD_API drd_status drd_prg_stream(const char* kind, const char* options_json, const char* seed_hex,
                                  uint64_t out_len, char** out_hex);

/* -- GIP derandomization ------------------------------------------------------ */

DRD_API drd_status drd_gip_r(const char* x_bits, int m, char** out_hex);
/* truth_bits may be NULL: the majority vote over the coin space is used.
 * Emits a per-input CSV and a summary JSON. */
DRD_API drd_status drd_derand_sr(const drd_program* p, const char* truth_bits, char** out_csv,
                                 char** out_summary_json);
DRD_API drd_status drd_protocol_cost(const drd_program* p, const char* x_bits, const char* y_bits,
                                     char** out_json);
/* options_json keys: delta, r, prg_block, prg_eps. */
DRD_API drd_status drd_amplify(const drd_program* p, const char* options_json, drd_program** out_program,
                               char** out_stats_json);

/* -- finite-field self test --------------------------------------------------- */

DRD_API drd_status drd_ff_test(char** out_json);

/* -- experiments ---------------------------------------------------------------- */

/* config_text: flat `key = value` lines or a flat JSON object. Writes
 * results.csv / results.json / manifest.json under out_dir. DRD_E_CHECK
 * signals an assertion-style failure (CLI exit code 2). */
DRD_API drd_status drd_experiment_run(const char* config_text, const char* out_dir,
                                      char** out_summary_json);
/* Canonical config dump (load -> dump). */
DRD_API drd_status drd_config_canonicalize(const char* config_text, char** out_canonical);

#ifdef __cplusplus
}
#endif

#endif /* DERAND_H */
