#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/text_pipeline.hpp"

namespace strass {

/// Pretrained word vectors, immutable once constructed. Sentence and document
/// embeddings are token-level means over the in-vocabulary tokens.
class EmbeddingSpace {
 public:
  EmbeddingSpace(int dim, std::vector<std::pair<std::string, Eigen::VectorXd>> entries);

  /// Text format: header line "vocab_size dim", then "token v1 ... vn" per
  /// line. With `has_header` false the dimension is inferred from the first
  /// line and the vocabulary size from the line count.
  static EmbeddingSpace load(std::istream& in, bool has_header = true);

  void save(std::ostream& out) const;

  int dim() const { return dim_; }
  std::size_t vocab_size() const { return tokens_.size(); }
  const Eigen::VectorXd* find(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  int dim_;
  std::vector<std::string> tokens_;  // insertion order, for deterministic save
  std::unordered_map<std::string, Eigen::VectorXd> table_;
};

struct EmbedResult {
  Eigen::VectorXd vector;
  bool degenerate = false;  // no in-vocabulary token contributed
};

/// Mean of the in-vocabulary token vectors; zero vector + degenerate flag
/// when nothing is in vocabulary.
EmbedResult embed_tokens(const EmbeddingSpace& space, std::span<const std::string> tokens);

/// Token-level mean over the concatenation of all sentence tokens (not the
/// mean of sentence means).
EmbedResult embed_document(const EmbeddingSpace& space, std::span<const SentenceSpan> sentences);

}  // namespace strass
