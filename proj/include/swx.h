/* swx.h - C API of the sliding-window language classifier and simulator.
 *
 * All functions return SWX_OK (0) on success and a nonzero status code on
 * failure; swx_last_error() describes the most recent failure in the
 * calling thread. Structured inputs and outputs are JSON strings; strings
 * returned through out-parameters are owned by the caller and must be
 * released with swx_string_free().
 */

#ifndef SWX_H
#define SWX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swx_status {
    SWX_OK = 0,
    SWX_ERR_PARSE = 1,    /* malformed JSON / regex / stream spec */
    SWX_ERR_INVALID = 2,  /* argument outside its domain */
    SWX_ERR_CONTRACT = 3, /* caller contract violated (tag check, alphabet mismatch) */
    SWX_ERR_NO_WITNESS = 4,
    SWX_ERR_INTERNAL = 5
} swx_status;

/* Opaque handles. */
typedef struct swx_dfa swx_dfa;
typedef struct swx_factory swx_factory; /* compiled algorithm, parameterized by n */
typedef struct swx_swa swx_swa;         /* one instantiated streaming algorithm */

const char* swx_last_error(void);
void swx_string_free(char* s);

/* ---- automata ---------------------------------------------------------- */

swx_status swx_dfa_from_json(const char* json_text, swx_dfa** out);

/* alphabet: ordered symbol string, e.g. "abc"; NULL infers it from the
 * pattern. pad: 0 picks the first alphabet symbol. */
swx_status swx_dfa_from_regex(const char* pattern, const char* alphabet, char pad, swx_dfa** out);

swx_status swx_dfa_to_json(const swx_dfa* dfa, char** out_json);
swx_status swx_dfa_accepts(const swx_dfa* dfa, const char* word, int* out);
swx_status swx_dfa_state_count(const swx_dfa* dfa, uint32_t* out);
void swx_dfa_free(swx_dfa* dfa);

/* ---- classification ---------------------------------------------------- */

/* Verdict JSON: {"classes": {...}, "settings": {...}, "witnesses": {...}} */
swx_status swx_classify(const swx_dfa* dfa, char** out_verdict_json);

/* class_name: "ST-Len" | "ST-SF-Len" | "LI-Len" | "LB-PF-SF-Len" | "LI-PF-Len" */
swx_status swx_witness(const swx_dfa* dfa, const char* class_name, char** out_witness_json);

/* ---- sliding-window algorithms ----------------------------------------- */

/* spec_json: language spec tree; setting: "det-zero" | "rand-zero" |
 * "det-failure=PHI" | "rand-failure=PHI". */
swx_status swx_compile(const char* spec_json, const char* setting, swx_factory** out);
swx_status swx_factory_metadata(const swx_factory* f, uint64_t n, char** out_json);
swx_status swx_factory_instantiate(const swx_factory* f, uint64_t n, uint64_t seed, swx_swa** out);
void swx_factory_free(swx_factory* f);

swx_status swx_swa_step(swx_swa* a, char symbol);
swx_status swx_swa_query(const swx_swa* a, int* out);
swx_status swx_swa_space_bits(const swx_swa* a, uint64_t* out);
void swx_swa_free(swx_swa* a);

/* ---- experiments -------------------------------------------------------- */

/* request: {"spec": {...}, "setting": "...", "n": N, "stream": {...},
 *           "trials": T, "eps": E, "seed": S, "jobs": J}
 * response: {"report": {...}, "bounds": {...}} */
swx_status swx_run_experiment(const char* request_json, char** out_report_json);

/* request: {"spec": {...}, "setting": "...", "ns": [...], "seed": S,
 *           "probe_factor": F}
 * response: growth report with per-n observations and the best-fit shape. */
swx_status swx_bench_space(const char* request_json, char** out_report_json);

/* ---- acceptance suite ---------------------------------------------------- */

typedef void (*swx_verify_line_cb)(const char* line, void* user);

/* Runs every built-in acceptance criterion; emits one line per criterion.
 * *out_failures receives the number of failed criteria. jobs = 0 picks a
 * default worker count. */
swx_status swx_verify(unsigned jobs, swx_verify_line_cb cb, void* user, int* out_failures);

#ifdef __cplusplus
}
#endif

#endif /* SWX_H */
