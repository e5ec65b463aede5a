#include "core/embedding_space.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "core/error.hpp"

namespace strass {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double value = std::stod(std::string(field), &used);
    if (used != field.size() || !std::isfinite(value)) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::DimensionMismatch,
                "line " + std::to_string(line_no) + ": bad vector component '" +
                    std::string(field) + "'");
  }
}

}  // namespace

EmbeddingSpace::EmbeddingSpace(int dim,
                               std::vector<std::pair<std::string, Eigen::VectorXd>> entries)
    : dim_(dim) {
  if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be positive");
  tokens_.reserve(entries.size());
  table_.reserve(entries.size());
  for (auto& [token, vector] : entries) {
    if (vector.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "token '" + token + "' has dimension " + std::to_string(vector.size()) +
                      ", expected " + std::to_string(dim));
    }
    if (!vector.allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "token '" + token + "' has non-finite components");
    }
    auto [it, inserted] = table_.emplace(token, std::move(vector));
    if (!inserted) throw Error(ErrorCode::DuplicateToken, "duplicate token '" + token + "'");
    tokens_.push_back(it->first);
  }
}

EmbeddingSpace EmbeddingSpace::load(std::istream& in, bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  long expected_vocab = -1;
  int dim = -1;

  if (has_header) {
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "empty input");
    ++line_no;
    auto fields = split_fields(line);
    try {
      if (fields.size() != 2) throw std::invalid_argument("");
      expected_vocab = std::stol(std::string(fields[0]));
      dim = std::stoi(std::string(fields[1]));
      if (expected_vocab < 0 || dim <= 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedHeader, "expected header 'vocab_size dim', got '" + line + "'");
    }
  }

  std::vector<std::pair<std::string, Eigen::VectorXd>> entries;
  if (expected_vocab > 0) entries.reserve(static_cast<std::size_t>(expected_vocab));
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (dim < 0) dim = static_cast<int>(fields.size()) - 1;
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                      " components, found " + std::to_string(fields.size() - 1));
    }
    Eigen::VectorXd vector(dim);
    for (int i = 0; i < dim; ++i) vector[i] = parse_real(fields[i + 1], line_no);
    entries.emplace_back(std::string(fields[0]), std::move(vector));
  }

  if (expected_vocab >= 0 && static_cast<long>(entries.size()) != expected_vocab) {
    throw Error(ErrorCode::MalformedHeader,
                "header promised " + std::to_string(expected_vocab) + " entries, found " +
                    std::to_string(entries.size()));
  }
  if (dim < 0) throw Error(ErrorCode::MalformedHeader, "no entries and no header");
  return EmbeddingSpace(dim, std::move(entries));
}

void EmbeddingSpace::save(std::ostream& out) const {
  out << tokens_.size() << ' ' << dim_ << '\n';
  char buf[64];
  for (const std::string& token : tokens_) {
    out << token;
    const Eigen::VectorXd& v = table_.at(token);
    for (int i = 0; i < dim_; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

const Eigen::VectorXd* EmbeddingSpace::find(std::string_view token) const {
  auto it = table_.find(std::string(token));
  return it == table_.end() ? nullptr : &it->second;
}

EmbedResult embed_tokens(const EmbeddingSpace& space, std::span<const std::string> tokens) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(space.dim());
  std::size_t hits = 0;
  for (const std::string& token : tokens) {
    if (const Eigen::VectorXd* v = space.find(token)) {
      sum += *v;
      ++hits;
    }
  }
  if (hits == 0) return {std::move(sum), true};
  sum /= static_cast<double>(hits);
  return {std::move(sum), false};
}

EmbedResult embed_document(const EmbeddingSpace& space, std::span<const SentenceSpan> sentences) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(space.dim());
  std::size_t hits = 0;
  for (const SentenceSpan& sentence : sentences) {
    for (const std::string& token : sentence.tokens) {
      if (const Eigen::VectorXd* v = space.find(token)) {
        sum += *v;
        ++hits;
      }
    }
  }
  if (hits == 0) return {std::move(sum), true};
  sum /= static_cast<double>(hits);
  return {std::move(sum), false};
}

}  // namespace strass
