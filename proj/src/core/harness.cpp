#include "core/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/error.hpp"
#include "core/similarity.hpp"

namespace strass {
namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct PreparedRecord {
  Document document;
  std::vector<std::string> reference_tokens;
  Eigen::VectorXd reference_embedding;
  bool reference_degenerate = true;
  std::vector<Eigen::VectorXd> reference_sentences;  // non-degenerate ones only
};

PreparedRecord prepare_record(const EmbeddingSpace& space, const CorpusRecord& record,
                              const PreprocessOptions& opts) {
  PreparedRecord prepared;
  prepared.document = build_document(space, record.document, opts);

  std::string summary = preprocess(record.summary, opts);
  prepared.reference_tokens = tokenize(summary);
  EmbedResult ref = embed_tokens(space, prepared.reference_tokens);
  prepared.reference_embedding = std::move(ref.vector);
  prepared.reference_degenerate = ref.degenerate;
  for (const SentenceSpan& span : split_sentences(summary)) {
    EmbedResult sentence = embed_tokens(space, span.tokens);
    if (!sentence.degenerate) prepared.reference_sentences.push_back(std::move(sentence.vector));
  }
  return prepared;
}

Selection run_extractor(const std::string& name, const AffineTransform* params,
                        const PreparedRecord& prepared, double threshold) {
  if (name == "strass") {
    if (params == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "the strass extractor needs a checkpoint");
    }
    return extract_strass(*params, prepared.document, threshold);
  }
  if (name == "baseline") return extract_baseline(prepared.document, threshold);
  if (name == "oracle") {
    if (prepared.reference_degenerate) {
      throw Error(ErrorCode::ZeroVector, "reference summary embedding is degenerate");
    }
    return extract_oracle(prepared.document, prepared.reference_embedding, threshold);
  }
  if (name == "oracle-sent") {
    return extract_oracle_sent(prepared.document, prepared.reference_sentences);
  }
  if (name == "lead3") return extract_lead3(prepared.document);
  throw Error(ErrorCode::InvalidArgument, "unknown extractor '" + name + "'");
}

}  // namespace

std::vector<ExtractorReport> evaluate_extractors(const EmbeddingSpace& space,
                                                 std::span<const CorpusRecord> records,
                                                 const AffineTransform* params,
                                                 std::span<const std::string> extractor_names,
                                                 const EvalOptions& options) {
  if (records.empty()) throw Error(ErrorCode::EmptySplit, "no records to evaluate");
  if (extractor_names.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no extractor requested");
  }

  std::vector<PreparedRecord> prepared;
  prepared.reserve(records.size());
  for (const CorpusRecord& record : records) prepared.push_back(prepare_record(space, record, options.text));

  std::vector<ExtractorReport> reports;
  reports.reserve(extractor_names.size());
  for (const std::string& name : extractor_names) {
    ExtractorReport report;
    report.extractor = name;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
    pairs.reserve(prepared.size());
    for (const PreparedRecord& item : prepared) {
      try {
        Selection selection = run_extractor(name, params, item, options.threshold);
        std::string candidate = render_summary(item.document, selection);
        pairs.emplace_back(tokenize(candidate), item.reference_tokens);
        ++report.documents_scored;
      } catch (const Error&) {
        ++report.documents_skipped;
      }
    }
    if (pairs.empty()) {
      throw Error(ErrorCode::NoUsableSentences,
                  "extractor '" + name + "' scored no document");
    }
    CorpusRouge rouge = corpus_rouge(pairs);
    report.rouge1 = rouge.rouge1;
    report.rouge2 = rouge.rouge2;
    report.rougeL = rouge.rougeL;
    report.r1_f1_ci = bootstrap_ci(rouge.per_doc_r1_f1, options.bootstrap_resamples, options.seed);
    report.r2_f1_ci =
        bootstrap_ci(rouge.per_doc_r2_f1, options.bootstrap_resamples, options.seed + 1);
    report.rl_f1_ci =
        bootstrap_ci(rouge.per_doc_rl_f1, options.bootstrap_resamples, options.seed + 2);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string evaluation_tsv(std::span<const ExtractorReport> reports) {
  std::ostringstream out;
  out << "extractor\tmetric\tprecision\trecall\tf1\tf1_ci_lower\tf1_ci_upper\tdocs\tskipped\n";
  for (const ExtractorReport& report : reports) {
    struct Row {
      const char* metric;
      const RougeScore* score;
      const ConfidenceInterval* ci;
    };
    const Row rows[] = {{"rouge-1", &report.rouge1, &report.r1_f1_ci},
                        {"rouge-2", &report.rouge2, &report.r2_f1_ci},
                        {"rouge-l", &report.rougeL, &report.rl_f1_ci}};
    for (const Row& row : rows) {
      out << report.extractor << '\t' << row.metric << '\t' << format_real(row.score->precision)
          << '\t' << format_real(row.score->recall) << '\t' << format_real(row.score->f1) << '\t'
          << format_real(row.ci->lower) << '\t' << format_real(row.ci->upper) << '\t'
          << report.documents_scored << '\t' << report.documents_skipped << '\n';
    }
  }
  return out.str();
}

TrainOnCorpusResult train_on_corpus(const EmbeddingSpace& space,
                                    std::span<const CorpusRecord> records, const Hyperparams& hp,
                                    const PreprocessOptions& opts, TrainMode mode) {
  if (records.empty()) throw Error(ErrorCode::EmptySplit, "no records to train on");

  std::vector<TrainingExample> examples;
  examples.reserve(records.size());
  std::size_t skipped = 0;
  for (const CorpusRecord& record : records) {
    try {
      Document doc = build_document(space, record.document, opts);
      examples.push_back(make_training_example(space, doc, record.summary, opts));
    } catch (const Error&) {
      ++skipped;
    }
  }
  if (examples.empty()) {
    throw Error(ErrorCode::NoUsableSentences, "no trainable record in the corpus");
  }

  TrainResult trained = train(examples, hp, mode);
  return {std::move(trained.params), std::move(trained.epoch_mean_loss), examples.size(), skipped};
}

std::string history_tsv(std::span<const double> epoch_mean_loss) {
  std::ostringstream out;
  out << "epoch\tmean_loss\n";
  for (std::size_t i = 0; i < epoch_mean_loss.size(); ++i) {
    out << i << '\t' << format_real(epoch_mean_loss[i]) << '\n';
  }
  return out.str();
}

GridSearchResult grid_search(const EmbeddingSpace& space,
                             std::span<const CorpusRecord> train_records,
                             std::span<const CorpusRecord> valid_records,
                             std::span<const double> threshold_grid,
                             std::span<const double> lambda_grid, const Hyperparams& base,
                             const EvalOptions& options) {
  if (threshold_grid.empty() || lambda_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty hyperparameter grid");
  }

  GridSearchResult result;
  const std::string strass_name = "strass";
  bool have_best = false;
  for (double threshold : threshold_grid) {
    for (double lambda : lambda_grid) {
      Hyperparams cell_hp = base;
      cell_hp.threshold = threshold;
      cell_hp.lambda = lambda;
      cell_hp.validate();

      TrainOnCorpusResult trained = train_on_corpus(space, train_records, cell_hp, options.text);
      EvalOptions cell_options = options;
      cell_options.threshold = threshold;
      std::vector<ExtractorReport> reports = evaluate_extractors(
          space, valid_records, &trained.params, std::span(&strass_name, 1), cell_options);

      GridCell cell;
      cell.threshold = threshold;
      cell.lambda = lambda;
      cell.rouge_l_f1 = reports.front().rougeL.f1;
      cell.rouge_1_f1 = reports.front().rouge1.f1;
      cell.rouge_2_f1 = reports.front().rouge2.f1;
      result.cells.push_back(cell);

      // Highest ROUGE-L F1 wins; ties prefer the smaller lambda, then the
      // larger threshold (shorter summaries).
      bool better = false;
      if (!have_best) {
        better = true;
      } else {
        const GridCell& best = *std::find_if(
            result.cells.begin(), result.cells.end(), [&](const GridCell& c) {
              return c.threshold == result.best_threshold && c.lambda == result.best_lambda;
            });
        if (cell.rouge_l_f1 > best.rouge_l_f1) {
          better = true;
        } else if (cell.rouge_l_f1 == best.rouge_l_f1) {
          if (cell.lambda < best.lambda) better = true;
          else if (cell.lambda == best.lambda && cell.threshold > best.threshold) better = true;
        }
      }
      if (better) {
        result.best_threshold = threshold;
        result.best_lambda = lambda;
        have_best = true;
      }
    }
  }
  return result;
}

std::string grid_tsv(const GridSearchResult& result) {
  std::ostringstream out;
  out << "threshold\tlambda\trouge_l_f1\trouge_1_f1\trouge_2_f1\tbest\n";
  for (const GridCell& cell : result.cells) {
    bool is_best = cell.threshold == result.best_threshold && cell.lambda == result.best_lambda;
    out << format_real(cell.threshold) << '\t' << format_real(cell.lambda) << '\t'
        << format_real(cell.rouge_l_f1) << '\t' << format_real(cell.rouge_1_f1) << '\t'
        << format_real(cell.rouge_2_f1) << '\t' << (is_best ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<BenchRow> bench_summarize(std::span<const std::size_t> sizes, int repeats, int dim,
                                      std::uint64_t seed) {
  if (repeats < 1) throw Error(ErrorCode::InvalidArgument, "repeats must be positive");
  std::vector<BenchRow> rows;
  rows.reserve(sizes.size());
  PreprocessOptions opts;

  for (std::size_t size : sizes) {
    SyntheticConfig config;
    config.docs = 1;
    config.sentences_per_doc = size;
    config.dim = dim;
    config.planted_summary_size = 1;
    config.seed = seed ^ (0x9e3779b97f4a7c15ULL * (size + 1));
    config.tokens_per_sentence = 8;
    SyntheticCorpus synthetic = generate_synthetic(config);
    const std::string& text = synthetic.records.front().document;
    AffineTransform params = AffineTransform::identity(dim);

    auto run_once = [&]() {
      Document doc = build_document(synthetic.space, text, opts);
      Selection selection = extract_strass(params, doc, 0.8);
      return render_summary(doc, selection).size();
    };
    run_once();  // warm up caches before timing

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
      auto start = std::chrono::steady_clock::now();
      volatile std::size_t sink = run_once();
      auto stop = std::chrono::steady_clock::now();
      (void)sink;
      samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(samples.begin(), samples.end());
    double median = samples.size() % 2 == 1
                        ? samples[samples.size() / 2]
                        : 0.5 * (samples[samples.size() / 2 - 1] + samples[samples.size() / 2]);
    rows.push_back({size, median, repeats});
  }
  return rows;
}

std::string bench_tsv(std::span<const BenchRow> rows) {
  std::ostringstream out;
  out << "sentences\tmedian_ms\trepeats\n";
  for (const BenchRow& row : rows) {
    out << row.sentences << '\t' << format_real(row.median_ms) << '\t' << row.repeats << '\n';
  }
  return out.str();
}

std::string stats_tsv(const CorpusStats& stats) {
  std::ostringstream out;
  out << "records\tmean_sentences_per_doc\tmean_sentences_per_summary\tmean_tokens_per_doc\t"
         "mean_tokens_per_summary\n";
  out << stats.record_count << '\t' << format_real(stats.mean_sentences_per_doc) << '\t'
      << format_real(stats.mean_sentences_per_summary) << '\t'
      << format_real(stats.mean_tokens_per_doc) << '\t'
      << format_real(stats.mean_tokens_per_summary) << '\n';
  return out.str();
}

SummarizeResult summarize_text(const EmbeddingSpace& space, const AffineTransform& params,
                               std::string_view raw_text, const std::string& extractor,
                               double threshold, const PreprocessOptions& opts,
                               const std::optional<std::string>& reference) {
  CorpusRecord record{"input", std::string(raw_text), reference.value_or("")};
  PreparedRecord prepared = prepare_record(space, record, opts);
  if ((extractor == "oracle" || extractor == "oracle-sent") && !reference.has_value()) {
    throw Error(ErrorCode::InvalidArgument,
                "extractor '" + extractor + "' needs a reference summary");
  }
  Selection selection = run_extractor(extractor, &params, prepared, threshold);

  SummarizeResult result;
  result.summary = render_summary(prepared.document, selection);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  result.sentences.reserve(prepared.document.sentences.size());
  for (std::size_t i = 0; i < prepared.document.sentences.size(); ++i) {
    SentenceReport report;
    report.index = i;
    report.usable = !prepared.document.sentences[i].degenerate;
    report.score = nan;
    report.text = prepared.document.sentences[i].span.text;
    result.sentences.push_back(std::move(report));
  }
  // Scored extractors report ncos+ for every usable sentence, not only the
  // selected ones.
  if (extractor == "strass" || extractor == "baseline" || extractor == "oracle") {
    Eigen::VectorXd target;
    if (extractor == "strass") target = transform(params, prepared.document.embedding);
    else if (extractor == "baseline") target = prepared.document.embedding;
    else target = prepared.reference_embedding;
    DocumentScores scores = score_against(prepared.document, target);
    for (std::size_t i = 0; i < scores.sentence_indices.size(); ++i) {
      result.sentences[scores.sentence_indices[i]].score = scores.ncos[i];
    }
  } else {
    for (std::size_t i = 0; i < selection.indices.size(); ++i) {
      result.sentences[selection.indices[i]].score = selection.scores[i];
    }
  }
  for (std::size_t index : selection.indices) result.sentences[index].selected = true;
  return result;
}

std::string scores_tsv(std::span<const SentenceReport> sentences) {
  std::ostringstream out;
  out << "index\tusable\tselected\tscore\ttext\n";
  for (const SentenceReport& s : sentences) {
    out << s.index << '\t' << (s.usable ? 1 : 0) << '\t' << (s.selected ? 1 : 0) << '\t'
        << format_real(s.score) << '\t' << s.text << '\n';
  }
  return out.str();
}

void write_synthetic_splits(const std::filesystem::path& dir, const SynthSplits& config) {
  SyntheticConfig all = config.base;
  all.docs = config.train_docs + config.valid_docs + config.test_docs;
  if (all.docs == 0) throw Error(ErrorCode::InvalidArgument, "no documents requested");
  SyntheticCorpus synthetic = generate_synthetic(all);

  std::filesystem::create_directories(dir);
  auto write_split = [&](const char* name, std::size_t offset, std::size_t count) {
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
    save_corpus(out, std::span(synthetic.records).subspan(offset, count));
  };
  write_split("train.jsonl", 0, config.train_docs);
  write_split("valid.jsonl", config.train_docs, config.valid_docs);
  write_split("test.jsonl", config.train_docs + config.valid_docs, config.test_docs);

  std::ofstream embeddings(dir / "embeddings.txt");
  if (!embeddings) throw Error(ErrorCode::Io, "cannot write " + (dir / "embeddings.txt").string());
  synthetic.space.save(embeddings);
}

}  // namespace strass
