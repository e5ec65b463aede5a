#include "core/extractors.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "core/similarity.hpp"

namespace strass {
namespace {

Selection threshold_select(const DocumentScores& scores, double threshold) {
  Selection selection;
  for (std::size_t i = 0; i < scores.sentence_indices.size(); ++i) {
    if (scores.ncos[i] >= threshold) {
      selection.indices.push_back(scores.sentence_indices[i]);
      selection.scores.push_back(scores.ncos[i]);
    }
  }
  return selection;
}

}  // namespace

DocumentScores score_against(const Document& doc, const Eigen::VectorXd& target) {
  if (doc.usable.empty()) {
    throw Error(ErrorCode::NoUsableSentences, "document has no in-vocabulary sentence");
  }
  DocumentScores scores;
  scores.sentence_indices = doc.usable;
  scores.ncos = ncos_plus(doc.usable_embeddings(), target);
  return scores;
}

Selection extract_strass(const AffineTransform& params, const Document& doc, double threshold) {
  return threshold_select(score_against(doc, transform(params, doc.embedding)), threshold);
}

Selection extract_baseline(const Document& doc, double threshold) {
  return threshold_select(score_against(doc, doc.embedding), threshold);
}

Selection extract_oracle(const Document& doc, const Eigen::VectorXd& ref_sum, double threshold) {
  return threshold_select(score_against(doc, ref_sum), threshold);
}

Selection extract_oracle_sent(const Document& doc,
                              std::span<const Eigen::VectorXd> ref_sentences) {
  if (ref_sentences.empty()) {
    throw Error(ErrorCode::EmptySet, "no reference sentences to match");
  }
  if (doc.usable.empty()) {
    throw Error(ErrorCode::NoUsableSentences, "document has no in-vocabulary sentence");
  }

  std::vector<bool> taken(doc.sentences.size(), false);
  std::vector<double> best_score(doc.sentences.size(), 0.0);
  for (const Eigen::VectorXd& ref : ref_sentences) {
    std::size_t winner = doc.usable.front();
    double best = -2.0;
    for (std::size_t i : doc.usable) {
      double c = cos_sim(doc.sentences[i].embedding, ref);
      if (c > best) {  // strict: ties stay with the lowest index
        best = c;
        winner = i;
      }
    }
    if (!taken[winner] || best > best_score[winner]) best_score[winner] = best;
    taken[winner] = true;
  }

  Selection selection;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    if (taken[i]) {
      selection.indices.push_back(i);
      selection.scores.push_back(best_score[i]);
    }
  }
  return selection;
}

Selection extract_lead3(const Document& doc) {
  Selection selection;
  std::size_t count = std::min<std::size_t>(3, doc.sentences.size());
  for (std::size_t i = 0; i < count; ++i) {
    selection.indices.push_back(i);
    selection.scores.push_back(0.0);
  }
  return selection;
}

std::string render_summary(const Document& doc, const Selection& selection) {
  std::string out;
  for (std::size_t i = 0; i < selection.indices.size(); ++i) {
    if (i > 0) out += ' ';
    out += doc.sentences[selection.indices[i]].span.text;
  }
  return out;
}

}  // namespace strass
