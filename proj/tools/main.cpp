// strass command line: train, summarize, evaluate, gridsearch, bench, stats,
// synth. Thin wrapper over the C API; machine-readable TSV goes to stdout,
// human-oriented output to stderr.

#include <strass/strass.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct StringDeleter {
  void operator()(char* s) const { strass_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

struct SpaceDeleter {
  void operator()(strass_space* s) const { strass_space_close(s); }
};
struct CorpusDeleter {
  void operator()(strass_corpus* c) const { strass_corpus_close(c); }
};
struct ModelDeleter {
  void operator()(strass_model* m) const { strass_model_close(m); }
};

[[noreturn]] void fail(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  std::exit(1);
}

void check(strass_status status) {
  if (status != STRASS_OK) fail(strass_last_error());
}

std::unique_ptr<strass_space, SpaceDeleter> open_space(const std::string& path, bool no_header) {
  strass_space* space = nullptr;
  check(strass_space_open(path.c_str(), no_header ? 0 : 1, &space));
  return std::unique_ptr<strass_space, SpaceDeleter>(space);
}

std::unique_ptr<strass_corpus, CorpusDeleter> open_split(const std::string& corpus_dir,
                                                         const std::string& split) {
  std::string path = corpus_dir + "/" + split + ".jsonl";
  strass_corpus* corpus = nullptr;
  char* warnings = nullptr;
  check(strass_corpus_open(path.c_str(), &corpus, &warnings));
  ApiString owned(warnings);
  if (owned && owned.get()[0] != '\0') std::cerr << owned.get();
  return std::unique_ptr<strass_corpus, CorpusDeleter>(corpus);
}

std::string read_stream(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  return read_stream(in);
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail("cannot write " + out_path);
  out << content;
}

// Pads every column of a TSV block; numeric cells are shortened to four
// decimals for reading.
std::string align_tsv(const std::string& tsv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(tsv);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, '\t')) {
      char* end = nullptr;
      double value = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() && *end == '\0' && cell.find_first_not_of("0123456789") !=
                                                     std::string::npos) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", value);
        cell = buf;
      }
      cells.push_back(cell);
    }
    rows.push_back(std::move(cells));
  }
  std::vector<std::size_t> widths;
  for (const auto& cells : rows) {
    if (widths.size() < cells.size()) widths.resize(cells.size(), 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      widths[i] = std::max(widths[i], cells[i].size());
    }
  }
  std::ostringstream out;
  for (const auto& cells : rows) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << cells[i];
      if (i + 1 < cells.size()) out << std::string(widths[i] - cells[i].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

struct CommonOptions {
  std::string embeddings;
  std::string corpus_dir;
  std::string checkpoint;
  std::string out;
  std::string preset = "cass";
  bool no_header = false;
  bool no_lowercase = false;
  bool no_strip_accents = false;
  strass_hyperparams hp{};
  bool threshold_set = false;
  bool lambda_set = false;

  strass_text_options text() const {
    strass_text_options opts;
    opts.lowercase = no_lowercase ? 0 : 1;
    opts.strip_accents = no_strip_accents ? 0 : 1;
    return opts;
  }

  void apply_preset() {
    if (preset == "cass") {
      if (!lambda_set) hp.lambda = 0.3;
      if (!threshold_set) hp.threshold = 0.8;
    } else if (preset == "cnndm") {
      if (!lambda_set) hp.lambda = 0.4;
      if (!threshold_set) hp.threshold = 0.8;
    } else {
      fail("unknown preset '" + preset + "' (expected cass or cnndm)");
    }
  }
};

void add_text_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_flag("--no-lowercase", opts.no_lowercase, "Keep the original casing");
  cmd->add_flag("--no-strip-accents", opts.no_strip_accents, "Keep accented characters");
}

void add_hyper_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--threshold", opts.hp.threshold, "Selection threshold t in (0, 1]")
      ->each([&](const std::string&) { opts.threshold_set = true; });
  cmd->add_option("--lambda", opts.hp.lambda, "Compression/similarity trade-off in [0, 1]")
      ->each([&](const std::string&) { opts.lambda_set = true; });
  cmd->add_option("--steepness", opts.hp.steepness, "Sigmoid steepness k (1 = plain sigmoid)");
  cmd->add_option("--lr", opts.hp.learning_rate, "Gradient descent learning rate");
  cmd->add_option("--epochs", opts.hp.epochs, "Training epochs");
  cmd->add_option("--seed", opts.hp.seed, "Seed for every random choice");
  cmd->add_option("--preset", opts.preset, "Hyperparameter preset: cass or cnndm");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extractive summarization with a learned embedding-space transform"};
  app.require_subcommand(1);

  CommonOptions opts;
  strass_hyperparams_defaults(&opts.hp);

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train the transform on the train split");
  train->add_option("--embeddings", opts.embeddings, "Word-vector file")->required();
  train->add_option("--corpus", opts.corpus_dir, "Corpus directory")->required();
  train->add_option("--checkpoint", opts.checkpoint, "Checkpoint output path")->required();
  train->add_option("--out", opts.out, "Loss history TSV path (default stdout)");
  train->add_flag("--no-hdr", opts.no_header, "Embeddings file has no header line");
  add_hyper_flags(train, opts);
  add_text_flags(train, opts);

  // summarize ---------------------------------------------------------------
  std::string input_path;
  std::string reference_path;
  std::string extractor = "strass";
  auto* summarize = app.add_subcommand("summarize", "Summarize one document");
  summarize->add_option("--embeddings", opts.embeddings, "Word-vector file")->required();
  summarize->add_option("--checkpoint", opts.checkpoint, "Checkpoint to apply (identity if absent)");
  summarize->add_option("--input", input_path, "Document file (default stdin)");
  summarize->add_option("--reference", reference_path, "Reference summary file (oracles only)");
  summarize->add_option("--extractor", extractor,
                        "strass | baseline | oracle | oracle-sent | lead3");
  summarize->add_option("--out", opts.out, "Summary output path (default stdout)");
  summarize->add_flag("--no-hdr", opts.no_header, "Embeddings file has no header line");
  add_hyper_flags(summarize, opts);
  add_text_flags(summarize, opts);

  // evaluate ----------------------------------------------------------------
  std::string split = "test";
  std::vector<std::string> extractors;
  int resamples = 1000;
  auto* evaluate = app.add_subcommand("evaluate", "ROUGE evaluation of extractors on a split");
  evaluate->add_option("--embeddings", opts.embeddings, "Word-vector file")->required();
  evaluate->add_option("--corpus", opts.corpus_dir, "Corpus directory")->required();
  evaluate->add_option("--split", split, "train | valid | test");
  evaluate->add_option("--checkpoint", opts.checkpoint, "Checkpoint for the strass extractor");
  evaluate->add_option("--extractor", extractors, "Extractors to score (repeatable)");
  evaluate->add_option("--resamples", resamples, "Bootstrap resamples for the 95% CIs");
  evaluate->add_option("--out", opts.out, "Report TSV path (default stdout)");
  evaluate->add_flag("--no-hdr", opts.no_header, "Embeddings file has no header line");
  add_hyper_flags(evaluate, opts);
  add_text_flags(evaluate, opts);

  // gridsearch ---------------------------------------------------------------
  std::string t_grid = "0.7,0.8,0.9";
  std::string lambda_grid = "0.1,0.3,0.5";
  auto* gridsearch =
      app.add_subcommand("gridsearch", "Train per grid cell, pick the best ROUGE-L on valid");
  gridsearch->add_option("--embeddings", opts.embeddings, "Word-vector file")->required();
  gridsearch->add_option("--corpus", opts.corpus_dir, "Corpus directory")->required();
  gridsearch->add_option("--t-grid", t_grid, "Comma-separated threshold values");
  gridsearch->add_option("--lambda-grid", lambda_grid, "Comma-separated lambda values");
  gridsearch->add_option("--out", opts.out, "Grid report TSV path (default stdout)");
  gridsearch->add_flag("--no-hdr", opts.no_header, "Embeddings file has no header line");
  add_hyper_flags(gridsearch, opts);
  add_text_flags(gridsearch, opts);

  // bench ---------------------------------------------------------------------
  std::string sizes = "10,50,100,250,500,1000";
  int repeats = 7;
  int bench_dim = 64;
  auto* bench = app.add_subcommand("bench", "Time the summarization path by sentence count");
  bench->add_option("--sizes", sizes, "Comma-separated sentence counts");
  bench->add_option("--repeats", repeats, "Timing repetitions per size (median reported)");
  bench->add_option("--dim", bench_dim, "Synthetic embedding dimension");
  bench->add_option("--seed", opts.hp.seed, "Seed for the synthetic documents");
  bench->add_option("--out", opts.out, "Timing TSV path (default stdout)");

  // stats -----------------------------------------------------------------------
  std::string stats_split = "train";
  auto* stats = app.add_subcommand("stats", "Corpus size statistics");
  stats->add_option("--corpus", opts.corpus_dir, "Corpus directory")->required();
  stats->add_option("--split", stats_split, "train | valid | test");
  stats->add_option("--out", opts.out, "Stats TSV path (default stdout)");
  add_text_flags(stats, opts);

  // synth -----------------------------------------------------------------------
  std::string synth_dir;
  int synth_train = 200, synth_valid = 50, synth_test = 50;
  int synth_sentences = 8, synth_dim = 16, synth_planted = 1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted summaries");
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth->add_option("--docs", synth_train, "Documents in the train split");
  synth->add_option("--valid-docs", synth_valid, "Documents in the valid split");
  synth->add_option("--test-docs", synth_test, "Documents in the test split");
  synth->add_option("--sentences", synth_sentences, "Sentences per document");
  synth->add_option("--dim", synth_dim, "Embedding dimension");
  synth->add_option("--planted", synth_planted, "Planted summary sentences per document");
  synth->add_option("--seed", opts.hp.seed, "Generation seed");

  CLI11_PARSE(app, argc, argv);
  opts.apply_preset();
  strass_text_options text = opts.text();

  if (train->parsed()) {
    auto space = open_space(opts.embeddings, opts.no_header);
    auto corpus = open_split(opts.corpus_dir, "train");
    strass_model* model = nullptr;
    check(strass_model_init(strass_space_dim(space.get()), opts.hp.seed, &model));
    std::unique_ptr<strass_model, ModelDeleter> owned(model);
    char* history = nullptr;
    check(strass_train(model, space.get(), corpus.get(), &opts.hp, &text, &history));
    ApiString history_owned(history);
    check(strass_model_save(model, opts.checkpoint.c_str()));
    write_output(history_owned.get(), opts.out);
    std::cerr << "checkpoint written to " << opts.checkpoint << '\n';
    return 0;
  }

  if (summarize->parsed()) {
    auto space = open_space(opts.embeddings, opts.no_header);
    std::unique_ptr<strass_model, ModelDeleter> model;
    if (!opts.checkpoint.empty()) {
      strass_model* loaded = nullptr;
      check(strass_model_load(opts.checkpoint.c_str(), &loaded));
      model.reset(loaded);
      if (!opts.threshold_set) {
        strass_hyperparams from_ckpt;
        strass_model_hyperparams(loaded, &from_ckpt);
        opts.hp.threshold = from_ckpt.threshold;
      }
    } else {
      strass_model* identity = nullptr;
      check(strass_model_identity(strass_space_dim(space.get()), &identity));
      model.reset(identity);
    }

    std::string text_in = input_path.empty() ? read_stream(std::cin) : read_file(input_path);
    std::optional<std::string> reference;
    if (!reference_path.empty()) reference = read_file(reference_path);

    char* summary = nullptr;
    char* scores = nullptr;
    check(strass_summarize(model.get(), space.get(), text_in.c_str(), extractor.c_str(),
                           opts.hp.threshold, &text, reference ? reference->c_str() : nullptr,
                           &summary, &scores));
    ApiString summary_owned(summary), scores_owned(scores);
    std::cerr << align_tsv(scores_owned.get());
    std::string rendered = std::string(summary_owned.get()) + "\n";
    write_output(rendered, opts.out);
    if (!opts.out.empty()) std::cout << rendered;
    return 0;
  }

  if (evaluate->parsed()) {
    auto space = open_space(opts.embeddings, opts.no_header);
    auto corpus = open_split(opts.corpus_dir, split);
    std::unique_ptr<strass_model, ModelDeleter> model;
    if (!opts.checkpoint.empty()) {
      strass_model* loaded = nullptr;
      check(strass_model_load(opts.checkpoint.c_str(), &loaded));
      model.reset(loaded);
    }
    if (extractors.empty()) {
      extractors = {"baseline", "oracle", "oracle-sent", "lead3"};
      if (model) extractors.insert(extractors.begin(), "strass");
    }
    std::string joined;
    for (const std::string& name : extractors) {
      if (!joined.empty()) joined += ',';
      joined += name;
    }
    char* report = nullptr;
    check(strass_evaluate(model.get(), space.get(), corpus.get(), joined.c_str(),
                          opts.hp.threshold, &text, opts.hp.seed, resamples, &report));
    ApiString report_owned(report);
    std::cerr << align_tsv(report_owned.get());
    write_output(report_owned.get(), opts.out);
    return 0;
  }

  if (gridsearch->parsed()) {
    auto space = open_space(opts.embeddings, opts.no_header);
    auto train_corpus = open_split(opts.corpus_dir, "train");
    auto valid_corpus = open_split(opts.corpus_dir, "valid");
    char* report = nullptr;
    double best_t = 0.0, best_lambda = 0.0;
    check(strass_grid_search(space.get(), train_corpus.get(), valid_corpus.get(), t_grid.c_str(),
                             lambda_grid.c_str(), &opts.hp, &text, &report, &best_t,
                             &best_lambda));
    ApiString report_owned(report);
    std::cerr << align_tsv(report_owned.get());
    std::cerr << "best: threshold=" << best_t << " lambda=" << best_lambda << '\n';
    write_output(report_owned.get(), opts.out);
    return 0;
  }

  if (bench->parsed()) {
    char* table = nullptr;
    check(strass_bench(sizes.c_str(), repeats, bench_dim, opts.hp.seed, &table));
    ApiString table_owned(table);
    write_output(table_owned.get(), opts.out);
    return 0;
  }

  if (stats->parsed()) {
    auto corpus = open_split(opts.corpus_dir, stats_split);
    char* table = nullptr;
    check(strass_corpus_stats(corpus.get(), &text, &table));
    ApiString table_owned(table);
    write_output(table_owned.get(), opts.out);
    return 0;
  }

  if (synth->parsed()) {
    check(strass_synth(synth_dir.c_str(), synth_train, synth_valid, synth_test, synth_sentences,
                       synth_dim, synth_planted, opts.hp.seed));
    std::cerr << "synthetic corpus written to " << synth_dir << '\n';
    return 0;
  }

  return 0;
}
