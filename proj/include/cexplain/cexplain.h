/* cexplain: explainable probabilistic counterexamples for MDP mission
 * plans. C interface of the shared library; every entry point is
 * thread-compatible (no shared mutable state besides the per-thread error
 * slot) and reports failures through return codes plus cex_last_error(). */

#ifndef CEXPLAIN_H
#define CEXPLAIN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CEX_API __declspec(dllexport)
#else
#define CEX_API __attribute__((visibility("default")))
#endif

/* Return codes double as CLI exit codes. */
typedef enum cex_status {
    CEX_OK = 0,           /* requirement holds / command succeeded */
    CEX_ERROR = 1,        /* usage or input error; see cex_last_error() */
    CEX_VIOLATION = 2,    /* requirement violated, certificate available */
    CEX_SOLVER_LIMIT = 3  /* node or time limit stopped the search */
} cex_status;

/* Opaque model handle: the MDP, its vocabulary and the input digest. */
typedef struct cex_model cex_model;

typedef struct cex_options {
    double epsilon;         /* violation margin above lambda, default 1e-6 */
    int max_conjunction;    /* propositions per sentence, default 1 */
    int describe_targets;   /* nonzero appends one sentence per entered
                               target, default 1 */
    const char* terminal_action; /* NULL or "": "stop" when the model has
                                    one, else no target sentences */
    double time_limit_seconds;   /* <= 0: CEXPLAIN_TIME_LIMIT env var or
                                    the built-in default */
    long node_limit;             /* <= 0: built-in default */
    int machine_report;          /* nonzero: key=value report with timings;
                                    zero: byte-stable text report */
} cex_options;

/* Fills every field with its default. */
CEX_API void cex_options_init(cex_options* opt);

/* Loading. NULL on failure with the message in cex_last_error(). */
CEX_API cex_model* cex_model_load(const char* path);
CEX_API cex_model* cex_model_parse(const char* text);

/* Grid-world generator: side length n with the standard banded layout, or
 * a layout file text overriding it (n is ignored then). The result carries
 * a default target and terminal action. */
CEX_API cex_model* cex_model_warehouse(int n, const char* layout_text);

CEX_API void cex_model_free(cex_model* model);

/* Canonical model text; free with cex_string_free. */
CEX_API char* cex_model_serialize(const cex_model* model);

/* Commands. `target` names a proposition or a comma-separated list of
 * states; NULL falls back to the model's default target (generated models
 * only). Each writes a malloc'd report to *report (free with
 * cex_string_free) and returns the status; on CEX_ERROR *report stays
 * NULL and cex_last_error() has the reason. */

/* Model checking only: is Pr(eventually target) <= lambda violated? */
CEX_API cex_status cex_check(const cex_model* model, const char* target,
                             double lambda, const cex_options* opt,
                             char** report);

/* Minimal explainable counterexample (sentence-minimal encoding). */
CEX_API cex_status cex_explain(const cex_model* model, const char* target,
                               double lambda, const cex_options* opt,
                               char** report);

/* State-minimal critical subsystem (comparison baseline). */
CEX_API cex_status cex_baseline(const cex_model* model, const char* target,
                                double lambda, const cex_options* opt,
                                char** report);

/* LP-format export of the chosen encoding: "explain" or "minstate". */
CEX_API cex_status cex_export_lp(const cex_model* model, const char* target,
                                 double lambda, const char* encoding,
                                 const cex_options* opt, char** text);

/* Scalability table: one explain run per side length in ns[0..count).
 * Row failures land in the table's status column, not the return code. */
CEX_API cex_status cex_series(const int* ns, size_t count, double lambda,
                              const cex_options* opt, char** table);

/* Message of the calling thread's last failed call, empty after success.
 * Valid until the thread's next cexplain call. */
CEX_API const char* cex_last_error(void);

CEX_API void cex_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CEXPLAIN_H */
