#include "core/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

#include "core/error.hpp"

namespace strass {

CorpusLoadResult load_corpus(std::istream& in) {
  CorpusLoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRecord,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!parsed.is_object() || !parsed.contains("id") || !parsed.contains("document") ||
        !parsed.contains("summary") || !parsed["id"].is_string() ||
        !parsed["document"].is_string() || !parsed["summary"].is_string()) {
      throw Error(ErrorCode::MalformedRecord,
                  "line " + std::to_string(line_no) +
                      ": record needs string fields id, document, summary");
    }

    CorpusRecord record{parsed["id"].get<std::string>(), parsed["document"].get<std::string>(),
                        parsed["summary"].get<std::string>()};
    if (!seen_ids.insert(record.id).second) {
      throw Error(ErrorCode::DuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id '" + record.id + "'");
    }
    if (record.document.find_first_not_of(" \t\r\n") == std::string::npos) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": dropped record '" +
                                record.id + "' with empty document");
      continue;
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

void save_corpus(std::ostream& out, std::span<const CorpusRecord> records) {
  for (const CorpusRecord& record : records) {
    nlohmann::json object{
        {"id", record.id}, {"document", record.document}, {"summary", record.summary}};
    out << object.dump() << '\n';
  }
}

CorpusStats compute_stats(std::span<const CorpusRecord> records, const PreprocessOptions& opts) {
  CorpusStats stats;
  stats.record_count = records.size();
  if (records.empty()) return stats;

  for (const CorpusRecord& record : records) {
    auto doc_spans = split_sentences(preprocess(record.document, opts));
    auto sum_spans = split_sentences(preprocess(record.summary, opts));
    std::size_t doc_tokens = 0;
    std::size_t sum_tokens = 0;
    for (const SentenceSpan& span : doc_spans) doc_tokens += span.word_count;
    for (const SentenceSpan& span : sum_spans) sum_tokens += span.word_count;
    stats.mean_sentences_per_doc += static_cast<double>(doc_spans.size());
    stats.mean_sentences_per_summary += static_cast<double>(sum_spans.size());
    stats.mean_tokens_per_doc += static_cast<double>(doc_tokens);
    stats.mean_tokens_per_summary += static_cast<double>(sum_tokens);
  }
  double inv = 1.0 / static_cast<double>(records.size());
  stats.mean_sentences_per_doc *= inv;
  stats.mean_sentences_per_summary *= inv;
  stats.mean_tokens_per_doc *= inv;
  stats.mean_tokens_per_summary *= inv;
  return stats;
}

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  double n = v.norm();
  if (n < 1e-9) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / n;
}

Eigen::VectorXd rotate_coords(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[(i + 1) % v.size()] = v[i];
  return out;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
  if (config.dim < 2) throw Error(ErrorCode::InvalidArgument, "synthetic dim must be >= 2");
  if (config.sentences_per_doc == 0 || config.tokens_per_sentence == 0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic documents need sentences and tokens");
  }
  if (config.planted_summary_size == 0 ||
      config.planted_summary_size > config.sentences_per_doc) {
    throw Error(ErrorCode::InvalidArgument, "planted summary size out of range");
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::pair<std::string, Eigen::VectorXd>> vocabulary;
  std::vector<CorpusRecord> records;
  records.reserve(config.docs);

  for (std::size_t doc_index = 0; doc_index < config.docs; ++doc_index) {
    constexpr int kMaxAttempts = 64;
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      Eigen::VectorXd topic = random_unit(rng, config.dim);
      Eigen::VectorXd planted_direction = rotate_coords(topic);

      std::vector<std::size_t> order(config.sentences_per_doc);
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<bool> planted(config.sentences_per_doc, false);
      for (std::size_t i = 0; i < config.planted_summary_size; ++i) planted[order[i]] = true;

      std::vector<std::vector<std::pair<std::string, Eigen::VectorXd>>> sentence_tokens(
          config.sentences_per_doc);
      std::vector<Eigen::VectorXd> sentence_embeddings(config.sentences_per_doc);
      for (std::size_t s = 0; s < config.sentences_per_doc; ++s) {
        const Eigen::VectorXd& direction = planted[s] ? planted_direction : topic;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(config.dim);
        for (std::size_t w = 0; w < config.tokens_per_sentence; ++w) {
          Eigen::VectorXd vec(config.dim);
          for (int i = 0; i < config.dim; ++i) {
            vec[i] = direction[i] + config.token_noise * normal(rng);
          }
          std::string token = "d" + std::to_string(doc_index) + "s" + std::to_string(s) + "w" +
                              std::to_string(w);
          mean += vec;
          sentence_tokens[s].emplace_back(std::move(token), std::move(vec));
        }
        sentence_embeddings[s] = mean / static_cast<double>(config.tokens_per_sentence);
      }

      // The summary is the planted sentences verbatim, so its embedding is the
      // token mean over their tokens.
      Eigen::VectorXd summary_embedding = Eigen::VectorXd::Zero(config.dim);
      std::size_t planted_tokens = 0;
      for (std::size_t s = 0; s < config.sentences_per_doc; ++s) {
        if (!planted[s]) continue;
        for (const auto& [token, vec] : sentence_tokens[s]) {
          summary_embedding += vec;
          ++planted_tokens;
        }
      }
      summary_embedding /= static_cast<double>(planted_tokens);

      // Accept only when every planted sentence strictly dominates every
      // non-planted one against the summary embedding.
      double worst_planted = 2.0;
      double best_other = -2.0;
      for (std::size_t s = 0; s < config.sentences_per_doc; ++s) {
        double c = cosine(sentence_embeddings[s], summary_embedding);
        if (planted[s]) {
          worst_planted = std::min(worst_planted, c);
        } else {
          best_other = std::max(best_other, c);
        }
      }
      if (config.planted_summary_size < config.sentences_per_doc &&
          worst_planted <= best_other + 1e-6) {
        continue;  // redraw this document
      }

      std::string document;
      std::string summary;
      for (std::size_t s = 0; s < config.sentences_per_doc; ++s) {
        std::string sentence;
        for (const auto& [token, vec] : sentence_tokens[s]) {
          if (!sentence.empty()) sentence += ' ';
          sentence += token;
        }
        sentence += '.';
        if (!document.empty()) document += ' ';
        document += sentence;
        if (planted[s]) {
          if (!summary.empty()) summary += ' ';
          summary += sentence;
        }
        for (auto& entry : sentence_tokens[s]) vocabulary.push_back(std::move(entry));
      }

      records.push_back({"synth-" + std::to_string(doc_index), std::move(document),
                         std::move(summary)});
      accepted = true;
    }
    if (!accepted) {
      throw Error(ErrorCode::InvalidArgument,
                  "could not generate a separable synthetic document; lower token_noise");
    }
  }

  return {std::move(records), EmbeddingSpace(config.dim, std::move(vocabulary))};
}

}  // namespace strass
