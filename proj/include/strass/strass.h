/* strass: extractive summarization via learned embedding-space transforms.
 *
 * C interface over the core library: opaque handles, integer status codes,
 * and a thread-local error message. Every char* output parameter is owned by
 * the caller and must be released with strass_string_free(). Reports are
 * tab-separated UTF-8 with a header row.
 */
#ifndef STRASS_H
#define STRASS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STRASS_API __declspec(dllexport)
#else
#define STRASS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum strass_status {
  STRASS_OK = 0,
  STRASS_ERR_IO = 1,          /* missing or unreadable file */
  STRASS_ERR_PARSE = 2,       /* malformed header, record or checkpoint */
  STRASS_ERR_DIMENSION = 3,   /* vector/matrix dimension mismatch */
  STRASS_ERR_DUPLICATE = 4,   /* duplicate token or record id */
  STRASS_ERR_EMPTY = 5,       /* empty set, split or no usable sentences */
  STRASS_ERR_NUMERIC = 6,     /* zero vector or non-finite loss */
  STRASS_ERR_ARGUMENT = 7,    /* invalid argument or configuration */
  STRASS_ERR_VERSION = 8      /* unsupported checkpoint version */
} strass_status;

typedef struct strass_space strass_space;     /* immutable word-vector table */
typedef struct strass_corpus strass_corpus;   /* loaded records of one split */
typedef struct strass_model strass_model;     /* affine transform + hyperparameters */

typedef struct strass_hyperparams {
  double threshold;      /* selection threshold t in (0, 1] */
  double lambda;         /* compression/similarity trade-off in [0, 1] */
  double steepness;      /* sigmoid steepness k, 1 = plain sigmoid */
  double learning_rate;
  int epochs;
  uint64_t seed;
} strass_hyperparams;

typedef struct strass_text_options {
  int lowercase;
  int strip_accents;
} strass_text_options;

/* Message describing the most recent failure on this thread. */
STRASS_API const char* strass_last_error(void);
STRASS_API void strass_string_free(char* s);

/* Fills t=0.8, lambda=0.3, steepness=1, learning_rate=0.5, epochs=100, seed=42. */
STRASS_API void strass_hyperparams_defaults(strass_hyperparams* hp);
STRASS_API void strass_text_options_defaults(strass_text_options* opts);

/* --- embedding space --------------------------------------------------- */

/* Text format: optional "vocab_size dim" header, then "token v1 ... vn". */
STRASS_API strass_status strass_space_open(const char* path, int has_header,
                                           strass_space** out);
STRASS_API int strass_space_dim(const strass_space* space);
STRASS_API size_t strass_space_vocab_size(const strass_space* space);
STRASS_API void strass_space_close(strass_space* space);

/* --- corpus ------------------------------------------------------------ */

/* One JSON object per line: {"id": ..., "document": ..., "summary": ...}.
 * Records with an empty document are dropped; *warnings_out (optional)
 * receives one line per dropped record. */
STRASS_API strass_status strass_corpus_open(const char* path, strass_corpus** out,
                                            char** warnings_out);
STRASS_API size_t strass_corpus_size(const strass_corpus* corpus);
STRASS_API void strass_corpus_close(strass_corpus* corpus);

/* Mean sentence/token counts of documents and summaries, as TSV. */
STRASS_API strass_status strass_corpus_stats(const strass_corpus* corpus,
                                             const strass_text_options* opts, char** tsv_out);

/* --- model ------------------------------------------------------------- */

/* Identity weights plus seeded Gaussian noise: the untrained starting point. */
STRASS_API strass_status strass_model_init(int dim, uint64_t seed, strass_model** out);
/* Exact identity transform (the unsupervised baseline as a model). */
STRASS_API strass_status strass_model_identity(int dim, strass_model** out);
STRASS_API strass_status strass_model_load(const char* path, strass_model** out);
STRASS_API strass_status strass_model_save(const strass_model* model, const char* path);
STRASS_API int strass_model_dim(const strass_model* model);
STRASS_API void strass_model_hyperparams(const strass_model* model, strass_hyperparams* out);
STRASS_API void strass_model_close(strass_model* model);

/* --- operations --------------------------------------------------------- */

/* Trains in place starting from a fresh seeded initialization and stores the
 * hyperparameters in the model. *history_tsv (optional) receives the
 * per-epoch mean loss. */
STRASS_API strass_status strass_train(strass_model* model, const strass_space* space,
                                      const strass_corpus* corpus,
                                      const strass_hyperparams* hp,
                                      const strass_text_options* opts, char** history_tsv);

/* Extractors: "strass", "baseline", "oracle", "oracle-sent", "lead3".
 * `reference` may be NULL except for the oracle extractors. Outputs the
 * rendered summary and a per-sentence score table. */
STRASS_API strass_status strass_summarize(const strass_model* model, const strass_space* space,
                                          const char* text, const char* extractor,
                                          double threshold, const strass_text_options* opts,
                                          const char* reference, char** summary_out,
                                          char** scores_tsv);

/* ROUGE-1/2/L precision, recall, F1 with bootstrap 95% confidence intervals
 * on F1, one block of rows per extractor in `extractors_csv` (comma
 * separated). `model` may be NULL when "strass" is not requested. */
STRASS_API strass_status strass_evaluate(const strass_model* model, const strass_space* space,
                                         const strass_corpus* corpus, const char* extractors_csv,
                                         double threshold, const strass_text_options* opts,
                                         uint64_t seed, int bootstrap_resamples,
                                         char** report_tsv);

/* Trains one model per (threshold, lambda) cell on `train` and scores it on
 * `valid`; the best cell maximizes ROUGE-L F1 (ties: smaller lambda, then
 * larger threshold). */
STRASS_API strass_status strass_grid_search(const strass_space* space,
                                            const strass_corpus* train,
                                            const strass_corpus* valid,
                                            const char* threshold_grid_csv,
                                            const char* lambda_grid_csv,
                                            const strass_hyperparams* base,
                                            const strass_text_options* opts, char** report_tsv,
                                            double* best_threshold, double* best_lambda);

/* Median wall time of the summarization path on synthetic documents of each
 * size in `sizes_csv`. */
STRASS_API strass_status strass_bench(const char* sizes_csv, int repeats, int dim, uint64_t seed,
                                      char** table_tsv);

/* Writes train.jsonl/valid.jsonl/test.jsonl plus embeddings.txt into dir. */
STRASS_API strass_status strass_synth(const char* dir, int train_docs, int valid_docs,
                                      int test_docs, int sentences_per_doc, int dim,
                                      int planted_summary_size, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* STRASS_H */
