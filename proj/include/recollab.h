/*
 * recollab — recurring multi-actor collaboration prediction.
 *
 * C interface to the shared library. All functions returning a
 * recollab_status leave a human-readable message retrievable through
 * recollab_last_error() (thread-local) on failure. Strings handed out
 * through char** parameters are heap-allocated and must be released with
 * recollab_string_free(); handles must be released with the matching
 * *_close() call.
 */
#ifndef RECOLLAB_H
#define RECOLLAB_H

#include <stddef.h>

#if defined(_WIN32)
#define RECOLLAB_API __declspec(dllexport)
#else
#define RECOLLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum recollab_status {
  RECOLLAB_OK = 0,
  RECOLLAB_ERR_INVALID_ARGUMENT = 1,
  RECOLLAB_ERR_PARSE = 2,
  RECOLLAB_ERR_CONFIG = 3,
  RECOLLAB_ERR_COMPUTE = 4,
  RECOLLAB_ERR_IO = 5,
  RECOLLAB_ERR_NOT_FOUND = 6
} recollab_status;

/* Opaque handles. */
typedef struct recollab_corpus recollab_corpus;
typedef struct recollab_result recollab_result;

RECOLLAB_API const char* recollab_status_name(recollab_status status);
RECOLLAB_API const char* recollab_last_error(void);

/* ---- corpus ---------------------------------------------------------- */

/* Load a line-delimited JSON corpus ({"id","time","actors"} per line). */
RECOLLAB_API recollab_status recollab_corpus_open(const char* path,
                                                  recollab_corpus** out_corpus);
RECOLLAB_API recollab_status recollab_corpus_parse(const char* data, size_t length,
                                                   recollab_corpus** out_corpus);

/*
 * Generate a synthetic corpus. params_json fields: n_actors,
 * n_planted_groups, group_size_min, group_size_max, background_pair_rate,
 * recurrence_rate, n_snapshots, seed.
 */
RECOLLAB_API recollab_status recollab_corpus_synth(const char* params_json,
                                                   recollab_corpus** out_corpus);

RECOLLAB_API recollab_status recollab_corpus_save(const recollab_corpus* corpus,
                                                  const char* path);

/* {"records": N, "actors": N, "time_min": t, "time_max": t} */
RECOLLAB_API recollab_status recollab_corpus_stats(const recollab_corpus* corpus,
                                                   char** out_json);

RECOLLAB_API void recollab_corpus_close(recollab_corpus* corpus);

/* ---- pipeline -------------------------------------------------------- */

/*
 * config_json mirrors the pipeline configuration; every field is optional
 * unless stated: splits (required for evaluate), w, rule ("count"|"log"),
 * ranks, tbuf, seed, sizes, topn, full_list_min, model
 * ("hyper"|"graph"|"both"|"baseline"), max_iters, tol, cache_dir, corpus.
 */
RECOLLAB_API recollab_status recollab_predict(const recollab_corpus* corpus,
                                              const char* config_json,
                                              recollab_result** out_result);
RECOLLAB_API recollab_status recollab_evaluate(const recollab_corpus* corpus,
                                               const char* config_json,
                                               recollab_result** out_result);

/* Comparison table from two per-model metrics report documents. */
RECOLLAB_API recollab_status recollab_compare(const char* graph_metrics_json,
                                              const char* hyper_metrics_json,
                                              char** out_json);

/* ---- results --------------------------------------------------------- */

/* JSON array of model names present in the result. */
RECOLLAB_API recollab_status recollab_result_models(const recollab_result* result,
                                                    char** out_json);

/* Prediction outputs (predict results only). */
RECOLLAB_API recollab_status recollab_result_ranking_tsv(const recollab_result* result,
                                                         const char* model, int size,
                                                         char** out_tsv);
RECOLLAB_API recollab_status recollab_result_scores_tsv(const recollab_result* result,
                                                        const char* model,
                                                        char** out_tsv);

/* Full metrics document (evaluate results only). */
RECOLLAB_API recollab_status recollab_result_metrics_json(const recollab_result* result,
                                                          char** out_json);

RECOLLAB_API void recollab_result_close(recollab_result* result);
RECOLLAB_API void recollab_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* RECOLLAB_H */
