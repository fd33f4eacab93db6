/* Copyright 2026 The maidvote Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAIDVOTE_MAIDVOTE_H_
#define MAIDVOTE_MAIDVOTE_H_

/* C interface to the maidvote shared library.
 *
 * Functions return an mv_status. On failure the message is available from
 * mv_last_error() until the next call on the same thread. Strings handed
 * out through char** parameters are owned by the caller and released with
 * mv_string_free(). Distribution outputs are written to caller buffers of
 * length `n`, which must equal the size of the relevant domain.
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(MAIDVOTE_BUILDING)
#define MV_API __declspec(dllexport)
#else
#define MV_API __declspec(dllimport)
#endif
#else
#define MV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mv_status {
  MV_OK = 0,
  MV_ERR_STRUCTURAL = 1,
  MV_ERR_INPUT = 2,
  MV_ERR_ZERO_EVIDENCE = 3,
  MV_ERR_SPECIFICATION = 4,
  MV_ERR_RESOURCE = 5,
  MV_ERR_PARSE = 6,
  MV_ERR_INTERNAL = 7
} mv_status;

typedef enum mv_verdict {
  MV_VERIFIED = 0,
  MV_VIOLATED = 1,
  MV_INAPPLICABLE = 2
} mv_verdict;

typedef struct mv_scenario mv_scenario;

MV_API const char* mv_version(void);
MV_API const char* mv_status_name(mv_status status);
MV_API const char* mv_last_error(void);
MV_API void mv_string_free(char* s);

/* A file path, or the name of a bundled scenario ("table2", "anomalous"). */
MV_API mv_status mv_scenario_load(const char* name_or_path, mv_scenario** out);
MV_API mv_status mv_scenario_parse(const char* json_text, mv_scenario** out);
MV_API void mv_scenario_free(mv_scenario* sc);
MV_API mv_status mv_scenario_to_json(const mv_scenario* sc, char** out);

MV_API size_t mv_scenario_position_count(const mv_scenario* sc);
MV_API size_t mv_scenario_message_count(const mv_scenario* sc);
MV_API size_t mv_scenario_support_count(const mv_scenario* sc);
/* NULL when out of range. Valid for the lifetime of `sc`. */
MV_API const char* mv_scenario_position(const mv_scenario* sc, size_t i);
MV_API const char* mv_scenario_message(const mv_scenario* sc, size_t i);

/* P(T_k | D_k = d), one entry per position. */
MV_API mv_status mv_posterior_tk(const mv_scenario* sc, const char* d, double* out, size_t n);
/* Trusting vote distribution P(Y | T_i = t_i, D_k = d), one entry per
 * support value. */
MV_API mv_status mv_vote_trusting(const mv_scenario* sc, const char* t_i, const char* d,
                                  double* out, size_t n);
/* Suspicious vote distribution given publication b, using the pundit
 * context stored in the scenario. */
MV_API mv_status mv_vote_suspicious(const mv_scenario* sc, const char* t_i, const char* b,
                                    double* out, size_t n);
/* Anomalous-update check with the scenario's pundit context. Any output
 * pointer may be NULL. */
MV_API mv_status mv_verify_anomalous(const mv_scenario* sc, const char* t_i, const char* b,
                                     mv_verdict* verdict, double* trusting_margin,
                                     double* suspicious_margin);

/* Runs the command line (argv excludes the program name). Standard output
 * and standard error text are returned through `out` and `err`; either may
 * be NULL to discard. Returns the process exit code. */
MV_API int mv_cli_run(int argc, const char* const* argv, char** out, char** err);

#ifdef __cplusplus
}
#endif

#endif /* MAIDVOTE_MAIDVOTE_H_ */
