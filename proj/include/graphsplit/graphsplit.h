/* C interface to the graphsplit library. */
#ifndef GRAPHSPLIT_H
#define GRAPHSPLIT_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef GRAPHSPLIT_BUILDING
#    define GS_API __declspec(dllexport)
#  else
#    define GS_API __declspec(dllimport)
#  endif
#else
#  define GS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_INVALID_INPUT = 1,
  GS_ERR_INVALID_CONFIG = 2,
  GS_ERR_UNSUPPORTED_SCHEME = 3,
  GS_ERR_DIVERGENCE = 4,
  GS_ERR_IO = 5,
  GS_ERR_INTERNAL = 6
} gs_status;

typedef struct gs_scheme gs_scheme;
typedef struct gs_problem gs_problem;
typedef struct gs_result gs_result;

GS_API const char* gs_version(void);
/* Message for the last failing call on this thread; empty when none. */
GS_API const char* gs_last_error(void);
GS_API void gs_string_free(char* s);

GS_API gs_status gs_scheme_from_json(const char* json, gs_scheme** out);
/* preset_json is an object such as {"preset":"graph_fb","n":5}. */
GS_API gs_status gs_scheme_from_preset(const char* preset_json, gs_scheme** out);
GS_API void gs_scheme_free(gs_scheme* s);
GS_API gs_status gs_scheme_dims(const gs_scheme* s, size_t* n, size_t* m, size_t* p);
/* *all_pass is 1 when every required item passes; *report_json is owned by the caller. */
GS_API gs_status gs_scheme_check(const gs_scheme* s, int* all_pass, char** report_json);
/* regularity: "cocoercive" or "lipschitz". */
GS_API gs_status gs_scheme_tau(const gs_scheme* s, const char* regularity, double* tau);
GS_API gs_status gs_scheme_to_json(const gs_scheme* s, char** json);

GS_API gs_status gs_problem_from_json(const char* json, gs_problem** out);
GS_API void gs_problem_free(gs_problem* p);
GS_API gs_status gs_problem_dims(const gs_problem* p, size_t* n, size_t* dim);

/* config_json keys: gamma, lambda, regularity, max_iters, residual_tol, mode, record_every. */
GS_API gs_status gs_solve(const gs_scheme* s, const gs_problem* p, const char* config_json, gs_result** out);
GS_API void gs_result_free(gs_result* r);
GS_API gs_status gs_result_summary(const gs_result* r, char** json);
GS_API gs_status gs_result_trace_csv(const gs_result* r, char** csv);
/* Copies dim values into out. */
GS_API gs_status gs_result_consensus(const gs_result* r, double* out, size_t dim);

/* Applies "a.b.c=value" to a JSON config; value is parsed as JSON, else taken as a string. */
GS_API gs_status gs_config_set(const char* config_json, const char* assignment, char** out_json);

/* Runs a command (check, run, sweep, bench, equivalence). exit_code follows the CLI convention. */
GS_API gs_status gs_run_command(const char* command, const char* config_json, const char* out_dir, char** message,
                                int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
