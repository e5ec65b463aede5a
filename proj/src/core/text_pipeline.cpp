#include "core/text_pipeline.hpp"

#include <cctype>

namespace strass {
namespace {

// Minimal UTF-8 walker. Invalid byte sequences fall back to one code point
// per byte so the pipeline never throws on dirty corpus data.
char32_t next_codepoint(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  auto cont = [&](std::size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(pos + 1) & 0x3F);
    pos += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    char32_t cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(byte(pos + 1) & 0x3F) << 6) |
                  (byte(pos + 2) & 0x3F);
    pos += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    char32_t cp = (char32_t(b0 & 0x07) << 18) | (char32_t(byte(pos + 1) & 0x3F) << 12) |
                  (char32_t(byte(pos + 2) & 0x3F) << 6) | (byte(pos + 3) & 0x3F);
    pos += 4;
    return cp;
  }
  ++pos;
  return b0;
}

void append_codepoint(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_combining_mark(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

// Base letter of precomposed Latin letters whose canonical decomposition is
// base + combining mark(s). Letters without such a decomposition (ø, æ, œ,
// ß, đ, ł, ...) are returned unchanged.
char32_t accent_base(char32_t cp) {
  if (cp >= 0x00C0 && cp <= 0x00FF) {
    if (cp >= 0x00C0 && cp <= 0x00C5) return U'A';
    if (cp == 0x00C7) return U'C';
    if (cp >= 0x00C8 && cp <= 0x00CB) return U'E';
    if (cp >= 0x00CC && cp <= 0x00CF) return U'I';
    if (cp == 0x00D1) return U'N';
    if (cp >= 0x00D2 && cp <= 0x00D6) return U'O';
    if (cp >= 0x00D9 && cp <= 0x00DC) return U'U';
    if (cp == 0x00DD) return U'Y';
    if (cp >= 0x00E0 && cp <= 0x00E5) return U'a';
    if (cp == 0x00E7) return U'c';
    if (cp >= 0x00E8 && cp <= 0x00EB) return U'e';
    if (cp >= 0x00EC && cp <= 0x00EF) return U'i';
    if (cp == 0x00F1) return U'n';
    if (cp >= 0x00F2 && cp <= 0x00F6) return U'o';
    if (cp >= 0x00F9 && cp <= 0x00FC) return U'u';
    if (cp == 0x00FD || cp == 0x00FF) return U'y';
    return cp;
  }
  if (cp >= 0x0100 && cp <= 0x017E) {
    struct Range {
      char32_t first, last;
      char32_t upper, lower;
    };
    // Latin Extended-A pairs alternate upper/lower inside each range.
    static constexpr Range kRanges[] = {
        {0x0100, 0x0105, U'A', U'a'}, {0x0106, 0x010D, U'C', U'c'},
        {0x010E, 0x010F, U'D', U'd'}, {0x0112, 0x011B, U'E', U'e'},
        {0x011C, 0x0123, U'G', U'g'}, {0x0124, 0x0125, U'H', U'h'},
        {0x0128, 0x012F, U'I', U'i'}, {0x0130, 0x0130, U'I', U'I'},
        {0x0134, 0x0135, U'J', U'j'}, {0x0136, 0x0137, U'K', U'k'},
        {0x0139, 0x013E, U'L', U'l'}, {0x0143, 0x0148, U'N', U'n'},
        {0x014C, 0x0151, U'O', U'o'}, {0x0154, 0x0159, U'R', U'r'},
        {0x015A, 0x0161, U'S', U's'}, {0x0162, 0x0165, U'T', U't'},
        {0x0168, 0x0173, U'U', U'u'}, {0x0174, 0x0175, U'W', U'w'},
        {0x0176, 0x0176, U'Y', U'Y'}, {0x0177, 0x0177, U'y', U'y'},
        {0x0178, 0x0178, U'Y', U'Y'}, {0x0179, 0x017E, U'Z', U'z'},
    };
    for (const Range& r : kRanges) {
      if (cp >= r.first && cp <= r.last) {
        // Within a range the parity flips between upper and lower case; the
        // odd blocks (0x0139..0x013E, 0x0143..0x0148, 0x0179..0x017E) start
        // on the uppercase letter as well.
        bool is_upper = ((cp - r.first) % 2) == 0;
        return is_upper ? r.upper : r.lower;
      }
    }
  }
  return cp;
}

char32_t to_lower_cp(char32_t cp) {
  if (cp < 0x80) return static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
  if (is_combining_mark(cp)) return true;  // attaches to the preceding letter
  if (cp >= 0x0370 && cp < 0x2000) return true;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation and symbols
  return cp >= 0x2E80;
}

bool is_space_codepoint(char32_t cp) {
  if (cp < 0x80) return std::isspace(static_cast<int>(cp)) != 0;
  return cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x3000;
}

bool is_terminator(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string preprocess(std::string_view raw, const PreprocessOptions& opts) {
  std::string out;
  out.reserve(raw.size());
  std::size_t pos = 0;
  while (pos < raw.size()) {
    char32_t cp = next_codepoint(raw, pos);
    if (opts.strip_accents) {
      if (is_combining_mark(cp)) continue;
      cp = accent_base(cp);
    }
    if (opts.lowercase) cp = to_lower_cp(cp);
    append_codepoint(out, cp);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    char32_t cp = next_codepoint(text, pos);
    if (is_word_codepoint(cp)) {
      current.append(text.substr(start, pos - start));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  std::size_t segment_start = 0;
  std::size_t pos = 0;

  auto flush = [&](std::size_t end) {
    std::string_view segment = trim(text.substr(segment_start, end - segment_start));
    segment_start = end;
    if (segment.empty()) return;
    std::vector<std::string> tokens = tokenize(segment);
    if (tokens.empty()) return;
    SentenceSpan span;
    span.index = spans.size();
    span.word_count = tokens.size();
    span.tokens = std::move(tokens);
    span.text = std::string(segment);
    spans.push_back(std::move(span));
  };

  while (pos < text.size()) {
    char32_t cp = next_codepoint(text, pos);
    if (!is_terminator(cp)) continue;
    // Boundary only when the terminator closes the run: next char is
    // whitespace or end of input.
    std::size_t peek = pos;
    if (peek >= text.size()) {
      flush(pos);
      continue;
    }
    char32_t next = next_codepoint(text, peek);
    if (is_space_codepoint(next)) flush(pos);
  }
  flush(text.size());
  return spans;
}

}  // namespace strass
