#include "core/rouge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "core/error.hpp"

namespace strass {
namespace {

std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int j = 0; j < n; ++j) {
      if (j > 0) key += '\x1f';  // unit separator, cannot appear in a token
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

RougeScore make_rouge_score(double precision, double recall) {
  RougeScore score;
  score.precision = precision;
  score.recall = recall;
  score.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  return score;
}

RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
                   int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n-gram order must be at least 1");
  auto cand = ngram_counts(candidate, n);
  auto ref = ngram_counts(reference, n);

  long cand_total = 0;
  long ref_total = 0;
  long overlap = 0;
  for (const auto& [gram, count] : cand) cand_total += count;
  for (const auto& [gram, count] : ref) ref_total += count;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }

  double precision = cand_total > 0 ? static_cast<double>(overlap) / cand_total : 0.0;
  double recall = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
  return make_rouge_score(precision, recall);
}

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
  std::size_t lcs = lcs_length(candidate, reference);
  double precision = candidate.empty() ? 0.0 : static_cast<double>(lcs) / candidate.size();
  double recall = reference.empty() ? 0.0 : static_cast<double>(lcs) / reference.size();
  return make_rouge_score(precision, recall);
}

CorpusRouge corpus_rouge(
    std::span<const std::pair<std::vector<std::string>, std::vector<std::string>>> pairs) {
  CorpusRouge out;
  if (pairs.empty()) return out;

  auto accumulate = [](RougeScore& total, const RougeScore& s) {
    total.precision += s.precision;
    total.recall += s.recall;
    total.f1 += s.f1;
  };
  for (const auto& [candidate, reference] : pairs) {
    RougeScore r1 = rouge_n(candidate, reference, 1);
    RougeScore r2 = rouge_n(candidate, reference, 2);
    RougeScore rl = rouge_l(candidate, reference);
    accumulate(out.rouge1, r1);
    accumulate(out.rouge2, r2);
    accumulate(out.rougeL, rl);
    out.per_doc_r1_f1.push_back(r1.f1);
    out.per_doc_r2_f1.push_back(r2.f1);
    out.per_doc_rl_f1.push_back(rl.f1);
  }
  double inv = 1.0 / static_cast<double>(pairs.size());
  for (RougeScore* total : {&out.rouge1, &out.rouge2, &out.rougeL}) {
    total->precision *= inv;
    total->recall *= inv;
    total->f1 *= inv;
  }
  return out;
}

ConfidenceInterval bootstrap_ci(std::span<const double> per_doc_scores, int resamples,
                                std::uint64_t seed) {
  if (per_doc_scores.empty()) {
    throw Error(ErrorCode::EmptySet, "bootstrap over an empty score list");
  }
  if (resamples < 1) throw Error(ErrorCode::InvalidArgument, "resamples must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, per_doc_scores.size() - 1);
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < per_doc_scores.size(); ++i) sum += per_doc_scores[pick(rng)];
    means.push_back(sum / static_cast<double>(per_doc_scores.size()));
  }
  std::sort(means.begin(), means.end());

  ConfidenceInterval ci;
  double total = 0.0;
  for (double m : means) total += m;
  ci.mean = total / static_cast<double>(means.size());
  ci.lower = std::min(percentile(means, 0.025), ci.mean);
  ci.upper = std::max(percentile(means, 0.975), ci.mean);
  ci.level = 0.95;
  return ci;
}

}  // namespace strass
