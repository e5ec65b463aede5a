#include "core/document.hpp"

namespace strass {

std::vector<Eigen::VectorXd> Document::usable_embeddings() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(usable.size());
  for (std::size_t i : usable) out.push_back(sentences[i].embedding);
  return out;
}

Document build_document(const EmbeddingSpace& space, std::string_view raw_text,
                        const PreprocessOptions& opts) {
  Document doc;
  doc.preprocessed = preprocess(raw_text, opts);
  std::vector<SentenceSpan> spans = split_sentences(doc.preprocessed);

  EmbedResult doc_embedding = embed_document(space, spans);
  doc.embedding = std::move(doc_embedding.vector);
  doc.degenerate = doc_embedding.degenerate;

  doc.sentences.reserve(spans.size());
  for (SentenceSpan& span : spans) {
    EmbedResult embedded = embed_tokens(space, span.tokens);
    doc.word_count += span.word_count;
    if (!embedded.degenerate) doc.usable.push_back(doc.sentences.size());
    doc.sentences.push_back({std::move(span), std::move(embedded.vector), embedded.degenerate});
  }
  return doc;
}

}  // namespace strass
