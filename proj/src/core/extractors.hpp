#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/document.hpp"
#include "core/model.hpp"

namespace strass {

/// Indices are document order (strictly increasing); scores hold the ncos+
/// value of each selected sentence (the winning cosine for oracle-sent, zero
/// for lead-3 which scores nothing).
struct Selection {
  std::vector<std::size_t> indices;
  std::vector<double> scores;
};

/// Per-sentence scores for reporting: ncos+ over the usable sentences of the
/// document against an arbitrary target embedding.
struct DocumentScores {
  std::vector<std::size_t> sentence_indices;  // into doc.sentences
  std::vector<double> ncos;
};

DocumentScores score_against(const Document& doc, const Eigen::VectorXd& target);

Selection extract_strass(const AffineTransform& params, const Document& doc, double threshold);
Selection extract_baseline(const Document& doc, double threshold);
Selection extract_oracle(const Document& doc, const Eigen::VectorXd& ref_sum, double threshold);

/// Closest document sentence to each reference sentence; winners deduplicated,
/// ties toward the lowest index, output in document order.
Selection extract_oracle_sent(const Document& doc,
                              std::span<const Eigen::VectorXd> ref_sentences);

Selection extract_lead3(const Document& doc);

/// Selected sentences' text joined in document order with single spaces.
std::string render_summary(const Document& doc, const Selection& selection);

}  // namespace strass
