/* resolvex: stochastic resolvers for nondeterministic finite automata. C interface. */
#ifndef RESOLVEX_RESOLVEX_H
#define RESOLVEX_RESOLVEX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RVX_API __declspec(dllexport)
#else
#define RVX_API __attribute__((visibility("default")))
#endif

/* Verdict-style results double as process exit codes. */
typedef enum rvx_status {
  RVX_OK = 0,
  RVX_NEGATIVE = 1,
  RVX_UNKNOWN = 2,
  RVX_ERR_USAGE = 64,
  RVX_ERR_PARSE = 65,
  RVX_ERR_INPUT = 66,
  RVX_ERR_LIMIT = 67,
  RVX_ERR_INTERNAL = 70
} rvx_status;

typedef struct rvx_automaton rvx_automaton;

typedef struct rvx_options {
  int jobs;                  /* support-level parallelism, >= 1 */
  uint64_t seed;
  int starts;                /* optimizer restarts */
  int iterations;            /* subgradient steps per start */
  double tolerance;
  uint32_t max_bad_word_len; /* 0 = unbounded */
  int degree_cap;
  long long period_cap;
  int timing;                /* add wall-clock seconds to reports */
} rvx_options;

typedef enum rvx_format { RVX_FORMAT_NATIVE = 0, RVX_FORMAT_SMT = 1 } rvx_format;

RVX_API const char* rvx_version(void);
RVX_API const char* rvx_status_name(rvx_status s);
RVX_API void rvx_options_init(rvx_options* opts);

/* Strings handed out by the library are released with rvx_string_free. */
RVX_API void rvx_string_free(char* s);

/* On failure *out stays NULL and *error (if non-NULL) receives a JSON error object. */
RVX_API rvx_status rvx_automaton_parse(const char* text, rvx_automaton** out, char** error);
RVX_API rvx_status rvx_automaton_load(const char* path, rvx_automaton** out, char** error);
RVX_API void rvx_automaton_free(rvx_automaton* a);
RVX_API char* rvx_automaton_serialize(const rvx_automaton* a);
RVX_API const char* rvx_automaton_name(const rvx_automaton* a);

/* Analyses. *report receives JSON (or a JSON error object); opts may be NULL. */
RVX_API rvx_status rvx_classify(const rvx_automaton* a, const rvx_options* opts, char** report);
RVX_API rvx_status rvx_check_pr(const rvx_automaton* a, const rvx_options* opts, char** report);
RVX_API rvx_status rvx_lambda_maximize(const rvx_automaton* a, const rvx_options* opts, char** report);
RVX_API rvx_status rvx_lambda_check(const rvx_automaton* a, const char* lambda, const rvx_options* opts,
                                    char** report);
RVX_API rvx_status rvx_synthesize(const rvx_automaton* a, const rvx_options* opts, char** report);
/* resolver: resolver text, or NULL to use the weights of a pfa input. mc_samples 0 skips sampling. */
RVX_API rvx_status rvx_eval(const rvx_automaton* a, const char* resolver, const char* word, uint64_t mc_samples,
                            const rvx_options* opts, char** report);
/* support: "full", a drop list, or NULL for full. */
RVX_API rvx_status rvx_primitives(const rvx_automaton* a, const char* support, const rvx_options* opts,
                                  char** report);
/* lambda: "p/q" or NULL for symbolic. *text receives the constraint system itself. */
RVX_API rvx_status rvx_constraints(const rvx_automaton* a, const char* support, const char* lambda,
                                   rvx_format format, char** text);
RVX_API rvx_status rvx_unary(const rvx_automaton* a, const rvx_options* opts, char** report);
/* text: matrix block or single-letter pfa. */
RVX_API rvx_status rvx_markov(const char* text, const rvx_options* opts, char** report);
/* witness: bad-word decomposition ("x0=.. y1=..; Q1=..") or unambiguous witness ("x=.. y=.. z=.. pivot=.."). */
RVX_API rvx_status rvx_verify_witness(const rvx_automaton* a, const char* support, const char* witness,
                                      char** report);
RVX_API rvx_status rvx_dot(const rvx_automaton* a, int gamma, const char* support, char** text);

/* Generators write automaton text to *text. */
RVX_API rvx_status rvx_gen_spectrum(int m, int n, char** text);
RVX_API rvx_status rvx_gen_unary_hard(const char* cycles, char** text);
RVX_API rvx_status rvx_gen_pspace_hard(const rvx_automaton* const* dfas, size_t count, char** text);
RVX_API rvx_status rvx_gen_undec(const rvx_automaton* pfa, char** text);

#ifdef __cplusplus
}
#endif

#endif
