#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/embedding_space.hpp"
#include "core/text_pipeline.hpp"

namespace strass {

struct CorpusRecord {
  std::string id;
  std::string document;
  std::string summary;
};

struct CorpusLoadResult {
  std::vector<CorpusRecord> records;
  std::vector<std::string> warnings;  // dropped empty-story records, one line each
};

/// One JSON object per line with string fields id, document, summary.
/// Records with an empty document are dropped with a warning.
CorpusLoadResult load_corpus(std::istream& in);

void save_corpus(std::ostream& out, std::span<const CorpusRecord> records);

struct CorpusStats {
  double mean_sentences_per_doc = 0.0;
  double mean_sentences_per_summary = 0.0;
  double mean_tokens_per_doc = 0.0;
  double mean_tokens_per_summary = 0.0;
  std::size_t record_count = 0;
};

CorpusStats compute_stats(std::span<const CorpusRecord> records, const PreprocessOptions& opts);

struct SyntheticConfig {
  std::size_t docs = 200;
  std::size_t sentences_per_doc = 8;
  int dim = 16;
  std::size_t planted_summary_size = 1;
  std::uint64_t seed = 42;
  std::size_t tokens_per_sentence = 4;
  double token_noise = 0.05;
};

struct SyntheticCorpus {
  std::vector<CorpusRecord> records;
  EmbeddingSpace space;
};

/// Synthetic documents over a synthetic vocabulary. Each document carries a
/// planted subset of sentences whose text is the record's summary; the planted
/// sentence directions are a fixed coordinate rotation of the document topic,
/// so a single affine layer can map the document embedding onto them. The
/// planted sentences are asserted to be the strict cosine argmax against the
/// summary embedding.
SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

}  // namespace strass
