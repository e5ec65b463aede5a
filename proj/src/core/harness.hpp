#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/extractors.hpp"
#include "core/model.hpp"
#include "core/rouge.hpp"

namespace strass {

struct EvalOptions {
  double threshold = 0.8;
  PreprocessOptions text;
  std::uint64_t seed = 42;
  int bootstrap_resamples = 1000;
};

struct ExtractorReport {
  std::string extractor;
  std::size_t documents_scored = 0;
  std::size_t documents_skipped = 0;  // degenerate document or summary
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  ConfidenceInterval r1_f1_ci;
  ConfidenceInterval r2_f1_ci;
  ConfidenceInterval rl_f1_ci;
};

/// Scores each requested extractor over the records: extract, render, then
/// ROUGE against the reference summaries, with bootstrap CIs on per-document
/// F1. `params` may be null when "strass" is not requested.
std::vector<ExtractorReport> evaluate_extractors(const EmbeddingSpace& space,
                                                 std::span<const CorpusRecord> records,
                                                 const AffineTransform* params,
                                                 std::span<const std::string> extractor_names,
                                                 const EvalOptions& options);

std::string evaluation_tsv(std::span<const ExtractorReport> reports);

struct TrainOnCorpusResult {
  AffineTransform params;
  std::vector<double> history;
  std::size_t examples_used = 0;
  std::size_t records_skipped = 0;
};

TrainOnCorpusResult train_on_corpus(const EmbeddingSpace& space,
                                    std::span<const CorpusRecord> records, const Hyperparams& hp,
                                    const PreprocessOptions& opts,
                                    TrainMode mode = TrainMode::FullBatch);

std::string history_tsv(std::span<const double> epoch_mean_loss);

struct GridCell {
  double threshold = 0.0;
  double lambda = 0.0;
  double rouge_l_f1 = 0.0;
  double rouge_1_f1 = 0.0;
  double rouge_2_f1 = 0.0;
};

struct GridSearchResult {
  double best_threshold = 0.0;
  double best_lambda = 0.0;
  std::vector<GridCell> cells;
};

/// Trains one model per grid cell from the same seeded initialization and
/// scores it on the validation records; the cell with the highest ROUGE-L F1
/// wins, ties broken toward smaller lambda then larger threshold.
GridSearchResult grid_search(const EmbeddingSpace& space,
                             std::span<const CorpusRecord> train_records,
                             std::span<const CorpusRecord> valid_records,
                             std::span<const double> threshold_grid,
                             std::span<const double> lambda_grid, const Hyperparams& base,
                             const EvalOptions& options);

std::string grid_tsv(const GridSearchResult& result);

struct BenchRow {
  std::size_t sentences = 0;
  double median_ms = 0.0;
  int repeats = 0;
};

/// Times the summarization path (document build + extraction + rendering) on
/// synthetic documents of each size; reports the median wall time.
std::vector<BenchRow> bench_summarize(std::span<const std::size_t> sizes, int repeats, int dim,
                                      std::uint64_t seed);

std::string bench_tsv(std::span<const BenchRow> rows);

std::string stats_tsv(const CorpusStats& stats);

struct SentenceReport {
  std::size_t index = 0;
  bool usable = false;
  bool selected = false;
  double score = 0.0;  // NaN when the extractor assigns no score
  std::string text;
};

struct SummarizeResult {
  std::string summary;
  std::vector<SentenceReport> sentences;
};

/// Runs one extractor on raw text. `reference` is required by the oracle
/// extractors and ignored by the others.
SummarizeResult summarize_text(const EmbeddingSpace& space, const AffineTransform& params,
                               std::string_view raw_text, const std::string& extractor,
                               double threshold, const PreprocessOptions& opts,
                               const std::optional<std::string>& reference);

std::string scores_tsv(std::span<const SentenceReport> sentences);

struct SynthSplits {
  SyntheticConfig base;
  std::size_t train_docs = 200;
  std::size_t valid_docs = 50;
  std::size_t test_docs = 50;
};

/// Writes train/valid/test record files plus the shared embeddings.txt into
/// `dir` (created if missing).
void write_synthetic_splits(const std::filesystem::path& dir, const SynthSplits& config);

}  // namespace strass
