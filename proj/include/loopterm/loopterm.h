// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef LOOPTERM_LOOPTERM_H
#define LOOPTERM_LOOPTERM_H

#include <stddef.h>

#ifndef LT_API
#define LT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lt_loop lt_loop;
typedef struct lt_config lt_config;
typedef struct lt_verdict lt_verdict;

typedef enum lt_status {
  LT_OK = 0,
  LT_ERR_INVALID_ARGUMENT = 1,
  LT_ERR_DIMENSION = 2,
  LT_ERR_PRECONDITION = 3,
  LT_ERR_PARSE = 4,
  LT_ERR_STRICT_INEQUALITY = 5,
  LT_ERR_UNSUPPORTED = 6,
  LT_ERR_IO = 7,
  LT_ERR_TOOL = 8,
  LT_ERR_INTERNAL = 9
} lt_status;

typedef enum lt_verdict_kind {
  LT_NONTERMINATING = 0,
  LT_TERMINATING = 1,
  LT_UNKNOWN = 2
} lt_verdict_kind;

LT_API const char *lt_version(void);
LT_API const char *lt_status_string(lt_status status);

// Message of the last failed call on this thread, "" if none.
LT_API const char *lt_last_error(void);

// Strings returned through char ** are owned by the caller.
LT_API void lt_string_free(char *s);

// Loop text is either the loop(...) { guard: ...; step: ...; } language
// or a JSON object with matrices B, b, A, a (and optionally Beq, beq, Aeq, aeq).
LT_API lt_status lt_loop_parse(const char *text, lt_loop **out);
LT_API lt_status lt_loop_parse_file(const char *path, lt_loop **out);
LT_API void lt_loop_free(lt_loop *loop);
LT_API size_t lt_loop_dimension(const lt_loop *loop);
LT_API lt_status lt_loop_hash(const lt_loop *loop, char **out);
LT_API lt_status lt_loop_print(const lt_loop *loop, char **out);

// Keys: solver (argv, space separated), timeout (seconds), steps, starts,
// seed, jobs, denominator, smt, heuristics, per_shape (true/false).
LT_API lt_status lt_config_new(lt_config **out);
LT_API lt_status lt_config_set(lt_config *cfg, const char *key,
                               const char *value);
LT_API void lt_config_free(lt_config *cfg);
LT_API int lt_solver_available(const lt_config *cfg);

// cfg may be NULL for defaults.
LT_API lt_status lt_analyze(const lt_loop *loop, const lt_config *cfg,
                            lt_verdict **out);
LT_API lt_verdict_kind lt_verdict_get_kind(const lt_verdict *verdict);
LT_API lt_status lt_verdict_certificate(const lt_verdict *verdict, char **json);
LT_API lt_status lt_verdict_summary(const lt_verdict *verdict, char **text);
LT_API void lt_verdict_free(lt_verdict *verdict);

// *ok is 1 when the certificate re-verifies against the loop. detail may be NULL.
LT_API lt_status lt_certificate_check(const lt_loop *loop, const char *cert_json,
                                      int *ok, char **detail);

// Greedy run from start (rational strings such as "3" or "-1/2").
LT_API lt_status lt_simulate(const lt_loop *loop, const char *const *start,
                             size_t start_len, size_t steps, char **json);

// Witness-existence solver script. shape may be NULL for all shapes, or one of
// Zero, Ray, Line, Sector, HalfPlane, Plane.
LT_API lt_status lt_encode(const lt_loop *loop, const char *shape, char **script);

#ifdef __cplusplus
}
#endif

#endif // LOOPTERM_LOOPTERM_H
