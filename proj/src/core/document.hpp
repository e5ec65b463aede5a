#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <vector>

#include "core/embedding_space.hpp"
#include "core/text_pipeline.hpp"

namespace strass {

struct EmbeddedSentence {
  SentenceSpan span;
  Eigen::VectorXd embedding;
  bool degenerate = false;
};

/// A preprocessed document with per-sentence embeddings and the document
/// embedding. Degenerate (all out-of-vocabulary) sentences are kept for
/// indexing and rendering but excluded from every similarity computation.
struct Document {
  std::string preprocessed;
  std::vector<EmbeddedSentence> sentences;
  Eigen::VectorXd embedding;
  bool degenerate = false;
  std::size_t word_count = 0;
  std::vector<std::size_t> usable;  // indices of non-degenerate sentences

  std::vector<Eigen::VectorXd> usable_embeddings() const;
};

Document build_document(const EmbeddingSpace& space, std::string_view raw_text,
                        const PreprocessOptions& opts);

}  // namespace strass
