#include <doctest.h>

#include <sstream>

#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/similarity.hpp"

using namespace strass;

TEST_CASE("load_corpus reads one record per line") {
  std::istringstream in(
      R"({"id": "a", "document": "un texte. deux phrases.", "summary": "un texte."}
{"id": "b", "document": "autre document.", "summary": "autre."}
)");
  CorpusLoadResult result = load_corpus(in);
  REQUIRE(result.records.size() == 2);
  CHECK(result.records[0].id == "a");
  CHECK(result.records[1].summary == "autre.");
  CHECK(result.warnings.empty());
}

TEST_CASE("load_corpus error and warning paths") {
  {
    std::istringstream in(R"({"id": "a", "document": "x."}
)");
    try {
      load_corpus(in);
      FAIL("expected MalformedRecord");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedRecord);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  {
    std::istringstream in("this is not json\n");
    CHECK_THROWS_AS(load_corpus(in), Error);
  }
  {
    std::istringstream in(
        R"({"id": "a", "document": "x.", "summary": "x."}
{"id": "a", "document": "y.", "summary": "y."}
)");
    try {
      load_corpus(in);
      FAIL("expected DuplicateId");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DuplicateId);
    }
  }
  {
    std::istringstream in("");
    CHECK(load_corpus(in).records.empty());
  }
  {
    std::istringstream in(
        R"({"id": "empty", "document": "  ", "summary": "s."}
{"id": "ok", "document": "x.", "summary": "x."}
)");
    CorpusLoadResult result = load_corpus(in);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].id == "ok");
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("empty") != std::string::npos);
  }
}

TEST_CASE("save then load round-trips record content") {
  std::vector<CorpusRecord> records{
      {"id-1", "Un été, déjà. L'automne suit.", "Un été."},
      {"id-2", "Line with \"quotes\" and\ttabs.", "quotes."},
  };
  std::ostringstream out;
  save_corpus(out, records);
  std::istringstream in(out.str());
  CorpusLoadResult reloaded = load_corpus(in);
  REQUIRE(reloaded.records.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(reloaded.records[i].id == records[i].id);
    CHECK(reloaded.records[i].document == records[i].document);
    CHECK(reloaded.records[i].summary == records[i].summary);
  }
}

TEST_CASE("compute_stats examples") {
  PreprocessOptions opts;
  {
    std::vector<CorpusRecord> one{{"a", "un deux trois. quatre cinq six.", "un deux."}};
    CorpusStats stats = compute_stats(one, opts);
    CHECK(stats.record_count == 1);
    CHECK(stats.mean_sentences_per_doc == 2.0);
    CHECK(stats.mean_tokens_per_doc == 6.0);
    CHECK(stats.mean_sentences_per_summary == 1.0);
    CHECK(stats.mean_tokens_per_summary == 2.0);
  }
  {
    CorpusStats empty = compute_stats({}, opts);
    CHECK(empty.record_count == 0);
    CHECK(empty.mean_tokens_per_doc == 0.0);
  }
  {
    std::vector<CorpusRecord> three{
        {"a", "x.", "x."},
        {"b", "x y. z w.", "x y."},
        {"c", "x y z. a b c. d e f.", "x."},
    };
    CorpusStats stats = compute_stats(three, opts);
    CHECK(stats.mean_sentences_per_doc == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(stats.mean_tokens_per_doc == doctest::Approx((1.0 + 4.0 + 9.0) / 3.0).epsilon(1e-15));
    CHECK(stats.mean_sentences_per_summary == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("generate_synthetic plants the summary sentence") {
  SyntheticConfig config;
  config.docs = 10;
  config.sentences_per_doc = 6;
  config.dim = 12;
  config.seed = 5;
  SyntheticCorpus synthetic = generate_synthetic(config);
  REQUIRE(synthetic.records.size() == 10);

  PreprocessOptions opts;
  for (const CorpusRecord& record : synthetic.records) {
    // summary text is a copy of exactly one document sentence
    auto doc_spans = split_sentences(preprocess(record.document, opts));
    auto sum_spans = split_sentences(preprocess(record.summary, opts));
    REQUIRE(sum_spans.size() == 1);
    std::size_t matches = 0;
    std::size_t planted_index = 0;
    for (const auto& span : doc_spans) {
      if (span.text == sum_spans[0].text) {
        ++matches;
        planted_index = span.index;
      }
    }
    CHECK(matches == 1);

    // and it is the unique cosine argmax against the summary embedding
    std::vector<Eigen::VectorXd> embeddings;
    for (const auto& span : doc_spans) {
      embeddings.push_back(embed_tokens(synthetic.space, span.tokens).vector);
    }
    Eigen::VectorXd summary =
        embed_tokens(synthetic.space, sum_spans[0].tokens).vector;
    std::size_t argmax = 0;
    double best = -2.0;
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
      double c = cos_sim(embeddings[i], summary);
      if (c > best) {
        best = c;
        argmax = i;
      }
    }
    CHECK(argmax == planted_index);
  }
}

TEST_CASE("generate_synthetic determinism and edge cases") {
  SyntheticConfig config;
  config.docs = 3;
  config.sentences_per_doc = 4;
  config.dim = 8;
  config.seed = 77;
  SyntheticCorpus a = generate_synthetic(config);
  SyntheticCorpus b = generate_synthetic(config);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].document == b.records[i].document);
    CHECK(a.records[i].summary == b.records[i].summary);
  }
  CHECK(a.space.vocab_size() == b.space.vocab_size());

  config.docs = 0;
  CHECK(generate_synthetic(config).records.empty());
}

TEST_CASE("generate_synthetic with a multi-sentence planted summary") {
  SyntheticConfig config;
  config.docs = 5;
  config.sentences_per_doc = 6;
  config.planted_summary_size = 2;
  config.dim = 12;
  config.seed = 13;
  SyntheticCorpus synthetic = generate_synthetic(config);
  PreprocessOptions opts;
  for (const CorpusRecord& record : synthetic.records) {
    auto sum_spans = split_sentences(preprocess(record.summary, opts));
    CHECK(sum_spans.size() == 2);
  }
}
