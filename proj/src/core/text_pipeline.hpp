#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace strass {

struct PreprocessOptions {
  bool lowercase = true;
  bool strip_accents = true;
};

/// One sentence of a preprocessed document. `text` keeps the original
/// (post-preprocess, pre-tokenization) segment for rendering summaries.
struct SentenceSpan {
  std::size_t index = 0;
  std::vector<std::string> tokens;
  std::size_t word_count = 0;
  std::string text;
};

/// Accent stripping (canonical decomposition + combining-mark removal for the
/// Latin ranges) and lowercasing. Idempotent; leaves everything else intact.
std::string preprocess(std::string_view raw, const PreprocessOptions& opts);

/// Maximal runs of letters/digits; punctuation dropped.
std::vector<std::string> tokenize(std::string_view text);

/// Rule-based split on {., !, ?} followed by whitespace or end of input.
/// Segments with no tokens are dropped; indices are contiguous over the result.
std::vector<SentenceSpan> split_sentences(std::string_view text);

}  // namespace strass
