#include "strass/strass.h"

#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/harness.hpp"
#include "core/model.hpp"

namespace {

thread_local std::string t_last_error;

strass_status status_from(const strass::Error& error) {
  using strass::ErrorCode;
  switch (error.code()) {
    case ErrorCode::Io: return STRASS_ERR_IO;
    case ErrorCode::MalformedHeader:
    case ErrorCode::MalformedCheckpoint:
    case ErrorCode::MalformedRecord: return STRASS_ERR_PARSE;
    case ErrorCode::DimensionMismatch: return STRASS_ERR_DIMENSION;
    case ErrorCode::DuplicateToken:
    case ErrorCode::DuplicateId: return STRASS_ERR_DUPLICATE;
    case ErrorCode::EmptySet:
    case ErrorCode::EmptySplit:
    case ErrorCode::NoUsableSentences: return STRASS_ERR_EMPTY;
    case ErrorCode::ZeroVector:
    case ErrorCode::AllZeroSelection:
    case ErrorCode::NonFiniteLoss: return STRASS_ERR_NUMERIC;
    case ErrorCode::VersionMismatch: return STRASS_ERR_VERSION;
    case ErrorCode::InvalidArgument: return STRASS_ERR_ARGUMENT;
  }
  return STRASS_ERR_ARGUMENT;
}

template <typename Fn>
strass_status guarded(Fn&& fn) {
  try {
    fn();
    return STRASS_OK;
  } catch (const strass::Error& e) {
    t_last_error = std::string(strass::error_code_name(e.code())) + ": " + e.what();
    return status_from(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return STRASS_ERR_ARGUMENT;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

strass::PreprocessOptions to_text_options(const strass_text_options* opts) {
  strass::PreprocessOptions out;
  if (opts != nullptr) {
    out.lowercase = opts->lowercase != 0;
    out.strip_accents = opts->strip_accents != 0;
  }
  return out;
}

strass::Hyperparams to_hyperparams(const strass_hyperparams* hp) {
  strass::Hyperparams out;
  if (hp != nullptr) {
    out.threshold = hp->threshold;
    out.lambda = hp->lambda;
    out.steepness = hp->steepness;
    out.learning_rate = hp->learning_rate;
    out.epochs = hp->epochs;
    out.seed = hp->seed;
  }
  return out;
}

std::ifstream open_or_throw(const char* path) {
  if (path == nullptr) throw strass::Error(strass::ErrorCode::InvalidArgument, "null path");
  std::ifstream in(path);
  if (!in) throw strass::Error(strass::ErrorCode::Io, std::string("cannot open ") + path);
  return in;
}

std::vector<double> parse_csv_reals(const char* csv, const char* what) {
  if (csv == nullptr) {
    throw strass::Error(strass::ErrorCode::InvalidArgument, std::string("null ") + what);
  }
  std::vector<double> values;
  std::istringstream in(csv);
  std::string field;
  while (std::getline(in, field, ',')) {
    if (field.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw strass::Error(strass::ErrorCode::InvalidArgument,
                          std::string("bad ") + what + " value '" + field + "'");
    }
  }
  if (values.empty()) {
    throw strass::Error(strass::ErrorCode::InvalidArgument, std::string("empty ") + what);
  }
  return values;
}

}  // namespace

struct strass_space {
  strass::EmbeddingSpace space;
};

struct strass_corpus {
  std::vector<strass::CorpusRecord> records;
};

struct strass_model {
  strass::AffineTransform params;
  strass::Hyperparams hyper;
};

extern "C" {

const char* strass_last_error(void) { return t_last_error.c_str(); }

void strass_string_free(char* s) { delete[] s; }

void strass_hyperparams_defaults(strass_hyperparams* hp) {
  if (hp == nullptr) return;
  strass::Hyperparams defaults;
  hp->threshold = defaults.threshold;
  hp->lambda = defaults.lambda;
  hp->steepness = defaults.steepness;
  hp->learning_rate = defaults.learning_rate;
  hp->epochs = defaults.epochs;
  hp->seed = defaults.seed;
}

void strass_text_options_defaults(strass_text_options* opts) {
  if (opts == nullptr) return;
  opts->lowercase = 1;
  opts->strip_accents = 1;
}

strass_status strass_space_open(const char* path, int has_header, strass_space** out) {
  return guarded([&] {
    std::ifstream in = open_or_throw(path);
    *out = new strass_space{strass::EmbeddingSpace::load(in, has_header != 0)};
  });
}

int strass_space_dim(const strass_space* space) { return space->space.dim(); }

size_t strass_space_vocab_size(const strass_space* space) { return space->space.vocab_size(); }

void strass_space_close(strass_space* space) { delete space; }

strass_status strass_corpus_open(const char* path, strass_corpus** out, char** warnings_out) {
  return guarded([&] {
    std::ifstream in = open_or_throw(path);
    strass::CorpusLoadResult loaded = strass::load_corpus(in);
    if (warnings_out != nullptr) {
      std::string joined;
      for (const std::string& w : loaded.warnings) {
        joined += w;
        joined += '\n';
      }
      *warnings_out = copy_string(joined);
    }
    *out = new strass_corpus{std::move(loaded.records)};
  });
}

size_t strass_corpus_size(const strass_corpus* corpus) { return corpus->records.size(); }

void strass_corpus_close(strass_corpus* corpus) { delete corpus; }

strass_status strass_corpus_stats(const strass_corpus* corpus, const strass_text_options* opts,
                                  char** tsv_out) {
  return guarded([&] {
    strass::CorpusStats stats = strass::compute_stats(corpus->records, to_text_options(opts));
    *tsv_out = copy_string(strass::stats_tsv(stats));
  });
}

strass_status strass_model_init(int dim, uint64_t seed, strass_model** out) {
  return guarded([&] {
    strass::Hyperparams hyper;
    hyper.seed = seed;
    *out = new strass_model{strass::AffineTransform::seeded_init(dim, seed), hyper};
  });
}

strass_status strass_model_identity(int dim, strass_model** out) {
  return guarded([&] {
    *out = new strass_model{strass::AffineTransform::identity(dim), strass::Hyperparams{}};
  });
}

strass_status strass_model_load(const char* path, strass_model** out) {
  return guarded([&] {
    std::ifstream in = open_or_throw(path);
    strass::Checkpoint ckpt = strass::load_checkpoint(in);
    *out = new strass_model{std::move(ckpt.params), ckpt.hyper};
  });
}

strass_status strass_model_save(const strass_model* model, const char* path) {
  return guarded([&] {
    if (path == nullptr) throw strass::Error(strass::ErrorCode::InvalidArgument, "null path");
    std::ofstream out(path);
    if (!out) throw strass::Error(strass::ErrorCode::Io, std::string("cannot write ") + path);
    strass::save_checkpoint(out, model->params, model->hyper);
  });
}

int strass_model_dim(const strass_model* model) { return model->params.dim(); }

void strass_model_hyperparams(const strass_model* model, strass_hyperparams* out) {
  if (out == nullptr) return;
  out->threshold = model->hyper.threshold;
  out->lambda = model->hyper.lambda;
  out->steepness = model->hyper.steepness;
  out->learning_rate = model->hyper.learning_rate;
  out->epochs = model->hyper.epochs;
  out->seed = model->hyper.seed;
}

void strass_model_close(strass_model* model) { delete model; }

strass_status strass_train(strass_model* model, const strass_space* space,
                           const strass_corpus* corpus, const strass_hyperparams* hp,
                           const strass_text_options* opts, char** history_tsv) {
  return guarded([&] {
    strass::Hyperparams hyper = to_hyperparams(hp);
    strass::TrainOnCorpusResult result =
        strass::train_on_corpus(space->space, corpus->records, hyper, to_text_options(opts));
    model->params = std::move(result.params);
    model->hyper = hyper;
    if (history_tsv != nullptr) *history_tsv = copy_string(strass::history_tsv(result.history));
  });
}

strass_status strass_summarize(const strass_model* model, const strass_space* space,
                               const char* text, const char* extractor, double threshold,
                               const strass_text_options* opts, const char* reference,
                               char** summary_out, char** scores_tsv) {
  return guarded([&] {
    if (text == nullptr || extractor == nullptr) {
      throw strass::Error(strass::ErrorCode::InvalidArgument, "null text or extractor");
    }
    std::optional<std::string> ref;
    if (reference != nullptr) ref = std::string(reference);
    strass::AffineTransform identity = strass::AffineTransform::identity(space->space.dim());
    const strass::AffineTransform& params = model != nullptr ? model->params : identity;
    strass::SummarizeResult result = strass::summarize_text(
        space->space, params, text, extractor, threshold, to_text_options(opts), ref);
    if (summary_out != nullptr) *summary_out = copy_string(result.summary);
    if (scores_tsv != nullptr) *scores_tsv = copy_string(strass::scores_tsv(result.sentences));
  });
}

strass_status strass_evaluate(const strass_model* model, const strass_space* space,
                              const strass_corpus* corpus, const char* extractors_csv,
                              double threshold, const strass_text_options* opts, uint64_t seed,
                              int bootstrap_resamples, char** report_tsv) {
  return guarded([&] {
    if (extractors_csv == nullptr) {
      throw strass::Error(strass::ErrorCode::InvalidArgument, "null extractor list");
    }
    std::vector<std::string> names;
    std::istringstream in(extractors_csv);
    std::string field;
    while (std::getline(in, field, ',')) {
      if (field.find_first_not_of(" \t") != std::string::npos) names.push_back(field);
    }
    strass::EvalOptions options;
    options.threshold = threshold;
    options.text = to_text_options(opts);
    options.seed = seed;
    options.bootstrap_resamples = bootstrap_resamples;
    std::vector<strass::ExtractorReport> reports = strass::evaluate_extractors(
        space->space, corpus->records, model != nullptr ? &model->params : nullptr, names,
        options);
    *report_tsv = copy_string(strass::evaluation_tsv(reports));
  });
}

strass_status strass_grid_search(const strass_space* space, const strass_corpus* train,
                                 const strass_corpus* valid, const char* threshold_grid_csv,
                                 const char* lambda_grid_csv, const strass_hyperparams* base,
                                 const strass_text_options* opts, char** report_tsv,
                                 double* best_threshold, double* best_lambda) {
  return guarded([&] {
    std::vector<double> thresholds = parse_csv_reals(threshold_grid_csv, "threshold grid");
    std::vector<double> lambdas = parse_csv_reals(lambda_grid_csv, "lambda grid");
    strass::EvalOptions options;
    options.text = to_text_options(opts);
    strass::Hyperparams hyper = to_hyperparams(base);
    options.seed = hyper.seed;
    strass::GridSearchResult result = strass::grid_search(
        space->space, train->records, valid->records, thresholds, lambdas, hyper, options);
    if (report_tsv != nullptr) *report_tsv = copy_string(strass::grid_tsv(result));
    if (best_threshold != nullptr) *best_threshold = result.best_threshold;
    if (best_lambda != nullptr) *best_lambda = result.best_lambda;
  });
}

strass_status strass_bench(const char* sizes_csv, int repeats, int dim, uint64_t seed,
                           char** table_tsv) {
  return guarded([&] {
    std::vector<double> raw = parse_csv_reals(sizes_csv, "sizes");
    std::vector<std::size_t> sizes;
    sizes.reserve(raw.size());
    for (double v : raw) {
      if (v < 1) throw strass::Error(strass::ErrorCode::InvalidArgument, "sizes must be >= 1");
      sizes.push_back(static_cast<std::size_t>(v));
    }
    std::vector<strass::BenchRow> rows = strass::bench_summarize(sizes, repeats, dim, seed);
    *table_tsv = copy_string(strass::bench_tsv(rows));
  });
}

strass_status strass_synth(const char* dir, int train_docs, int valid_docs, int test_docs,
                           int sentences_per_doc, int dim, int planted_summary_size,
                           uint64_t seed) {
  return guarded([&] {
    if (dir == nullptr) throw strass::Error(strass::ErrorCode::InvalidArgument, "null directory");
    if (train_docs < 0 || valid_docs < 0 || test_docs < 0 || sentences_per_doc < 1 ||
        planted_summary_size < 1) {
      throw strass::Error(strass::ErrorCode::InvalidArgument, "negative or zero synth sizes");
    }
    strass::SynthSplits splits;
    splits.base.dim = dim;
    splits.base.sentences_per_doc = static_cast<std::size_t>(sentences_per_doc);
    splits.base.planted_summary_size = static_cast<std::size_t>(planted_summary_size);
    splits.base.seed = seed;
    splits.train_docs = static_cast<std::size_t>(train_docs);
    splits.valid_docs = static_cast<std::size_t>(valid_docs);
    splits.test_docs = static_cast<std::size_t>(test_docs);
    strass::write_synthetic_splits(dir, splits);
  });
}

}  // extern "C"
