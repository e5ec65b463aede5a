#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace strass {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore make_rouge_score(double precision, double recall);

/// Clipped n-gram overlap; empty denominators score zero.
RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
                   int n);

/// Longest common subsequence: P = L/|candidate|, R = L/|reference|.
RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

struct CorpusRouge {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  std::vector<double> per_doc_r1_f1;
  std::vector<double> per_doc_r2_f1;
  std::vector<double> per_doc_rl_f1;
};

/// Arithmetic mean of per-document precision/recall/F1 for R1, R2 and RL.
CorpusRouge corpus_rouge(
    std::span<const std::pair<std::vector<std::string>, std::vector<std::string>>> pairs);

struct ConfidenceInterval {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

/// Percentile bootstrap over resampled means (2.5/97.5), deterministic given
/// the seed.
ConfidenceInterval bootstrap_ci(std::span<const double> per_doc_scores, int resamples,
                                std::uint64_t seed);

}  // namespace strass
