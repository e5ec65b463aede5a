// Acceptance suite: runs every gate with its pinned tolerance and prints one
// pass/fail line per criterion. Exits nonzero when any gate fails.

#include <strass/strass.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/extractors.hpp"
#include "core/harness.hpp"
#include "core/model.hpp"
#include "core/rouge.hpp"
#include "core/similarity.hpp"
#include "support/oracles.hpp"

using namespace strass;
using namespace strass::testing;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  int number;
  const char* name;
  bool passed;
  std::string detail;
};

std::vector<Criterion> g_results;

void record(int number, const char* name, bool passed, const std::string& detail) {
  g_results.push_back({number, name, passed, detail});
  std::printf("[%s] %d. %s: %s\n", passed ? "PASS" : "FAIL", number, name, detail.c_str());
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// 1. analytic gradients vs central finite differences
// ---------------------------------------------------------------------------
void criterion_gradients() {
  auto start = Clock::now();
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> threshold(0.6, 0.9);
  const double lambdas[] = {0.0, 0.3, 1.0};

  double worst = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    TrainingExample example = random_example(rng, 8, 3, 7);
    AffineTransform params = AffineTransform::seeded_init(8, 5000 + instance, 0.05);
    Hyperparams hp;
    hp.threshold = threshold(rng);
    hp.lambda = lambdas[instance % 3];

    ForwardTrace trace = forward(params, example, hp);
    Gradients analytic = backward(params, example, hp, trace);
    Gradients numeric = finite_difference_gradients(params, example, hp, 1e-5);
    worst = std::max(worst, gradient_disagreement(analytic, numeric, 1e-7));
  }
  double elapsed = seconds_since(start);
  bool ok = worst < 1e-4 && elapsed < 10.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "20 instances, max relative disagreement %.2e (limit 1e-4), %.2f s (limit 10 s)",
                worst, elapsed);
  record(1, "gradient suite", ok, detail);
}

// ---------------------------------------------------------------------------
// 2. normalization chain invariants on 1000 random documents
// ---------------------------------------------------------------------------
void criterion_normalization() {
  std::mt19937_64 rng(20240502);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  const double thresholds[] = {0.05, 0.2, 0.5, 0.8, 0.95, 1.0};

  bool max_exact = true;
  bool moments_ok = true;
  bool rescale_ok = true;
  bool at_least_one = true;
  for (int round = 0; round < 1000; ++round) {
    Document doc = random_document(rng, 8, 1, 20);
    auto embeddings = doc.usable_embeddings();
    NormalizationTrace trace = normalize_chain(embeddings, doc.embedding);

    max_exact &= *std::max_element(trace.ncos.begin(), trace.ncos.end()) == 1.0;

    if (!trace.degenerate_std) {
      double mean = 0.0;
      for (double v : trace.rcos) mean += v;
      mean /= static_cast<double>(trace.rcos.size());
      double var = 0.0;
      for (double v : trace.rcos) var += (v - mean) * (v - mean);
      double sd = std::sqrt(var / static_cast<double>(trace.rcos.size()));
      moments_ok &= std::abs(mean - 0.5) < 1e-9 && std::abs(sd - 1.0) < 1e-9;
    } else {
      for (double v : trace.rcos) moments_ok &= v == 0.5;
      for (double v : trace.ncos) moments_ok &= v == 1.0;
    }

    double alpha = scale(rng);
    Document scaled = doc;
    for (auto& sentence : scaled.sentences) sentence.embedding *= alpha;
    scaled.embedding *= alpha;
    for (double t : thresholds) {
      Selection base = extract_baseline(doc, t);
      Selection rescaled = extract_baseline(scaled, t);
      rescale_ok &= base.indices == rescaled.indices;
      at_least_one &= !base.indices.empty();
    }
  }
  bool ok = max_exact && moments_ok && rescale_ok && at_least_one;
  std::string detail = std::string("max==1: ") + (max_exact ? "yes" : "NO") +
                       ", moments 0.5/1.0 within 1e-9: " + (moments_ok ? "yes" : "NO") +
                       ", rescale-invariant selection: " + (rescale_ok ? "yes" : "NO") +
                       ", nonempty at every t<=1: " + (at_least_one ? "yes" : "NO");
  record(2, "normalization suite", ok, detail);
}

// ---------------------------------------------------------------------------
// 3. identity checkpoint reproduces the baseline extractor
// ---------------------------------------------------------------------------
void criterion_baseline_equivalence() {
  std::ostringstream buffer;
  Hyperparams hp;
  save_checkpoint(buffer, AffineTransform::identity(8), hp);
  std::istringstream in(buffer.str());
  Checkpoint checkpoint = load_checkpoint(in);

  std::mt19937_64 rng(20240503);
  std::uniform_real_distribution<double> threshold(0.05, 1.0);
  std::size_t mismatches = 0;
  for (int round = 0; round < 500; ++round) {
    Document doc = random_document(rng, 8, 1, 15);
    double t = threshold(rng);
    Selection a = extract_strass(checkpoint.params, doc, t);
    Selection b = extract_baseline(doc, t);
    if (a.indices != b.indices) ++mismatches;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "500 documents, %zu selection mismatches", mismatches);
  record(3, "baseline equivalence", mismatches == 0, detail);
}

// ---------------------------------------------------------------------------
// 4. end-to-end learning signal through the C API (the CLI path)
// ---------------------------------------------------------------------------
double tsv_metric(const std::string& tsv, const std::string& extractor, const std::string& metric,
                  int column) {
  std::istringstream lines(tsv);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(fields, cell, '\t')) cells.push_back(cell);
    if (cells.size() > static_cast<std::size_t>(column) && cells[0] == extractor &&
        cells[1] == metric) {
      return std::stod(cells[column]);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "row not found: " + extractor + "/" + metric);
}

void criterion_learning_signal() {
  auto start = Clock::now();
  fs::path dir = fs::temp_directory_path() / "strass_acceptance_learning";
  fs::remove_all(dir);

  bool ok = false;
  char detail[240];
  try {
    if (strass_synth(dir.string().c_str(), 200, 20, 50, 8, 16, 1, 42) != STRASS_OK) {
      throw Error(ErrorCode::Io, strass_last_error());
    }
    strass_space* space = nullptr;
    strass_corpus* train = nullptr;
    strass_corpus* test = nullptr;
    if (strass_space_open((dir / "embeddings.txt").string().c_str(), 1, &space) != STRASS_OK ||
        strass_corpus_open((dir / "train.jsonl").string().c_str(), &train, nullptr) != STRASS_OK ||
        strass_corpus_open((dir / "test.jsonl").string().c_str(), &test, nullptr) != STRASS_OK) {
      throw Error(ErrorCode::Io, strass_last_error());
    }

    strass_hyperparams hp;
    strass_hyperparams_defaults(&hp);
    hp.epochs = 150;  // within the 200-epoch budget
    hp.learning_rate = 5.0;
    strass_text_options text;
    strass_text_options_defaults(&text);

    strass_model* model = nullptr;
    char* history_raw = nullptr;
    if (strass_model_init(16, hp.seed, &model) != STRASS_OK ||
        strass_train(model, space, train, &hp, &text, &history_raw) != STRASS_OK) {
      throw Error(ErrorCode::NonFiniteLoss, strass_last_error());
    }
    std::string history(history_raw);
    strass_string_free(history_raw);

    std::vector<double> losses;
    std::istringstream lines(history);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      losses.push_back(std::stod(line.substr(line.find('\t') + 1)));
    }
    bool loss_drops = !losses.empty() && losses.back() < losses.front();

    char* report_raw = nullptr;
    if (strass_evaluate(model, space, test, "strass,baseline,oracle", 0.8, &text, 42, 500,
                        &report_raw) != STRASS_OK) {
      throw Error(ErrorCode::InvalidArgument, strass_last_error());
    }
    std::string report(report_raw);
    strass_string_free(report_raw);

    double strass_f1 = tsv_metric(report, "strass", "rouge-l", 4);
    double baseline_f1 = tsv_metric(report, "baseline", "rouge-l", 4);
    double oracle_f1 = tsv_metric(report, "oracle", "rouge-l", 4);

    double elapsed = seconds_since(start);
    bool margin = strass_f1 >= baseline_f1 + 0.02;  // two absolute points
    bool ordering = oracle_f1 >= strass_f1 && strass_f1 >= baseline_f1;
    ok = loss_drops && margin && ordering && elapsed < 120.0;
    std::snprintf(detail, sizeof(detail),
                  "loss %.4f->%.4f, ROUGE-L F1 oracle %.4f >= strass %.4f >= baseline %.4f, "
                  "margin %.4f (need >= 0.02), %.1f s (limit 120 s)",
                  losses.empty() ? 0.0 : losses.front(), losses.empty() ? 0.0 : losses.back(),
                  oracle_f1, strass_f1, baseline_f1, strass_f1 - baseline_f1, elapsed);

    strass_model_close(model);
    strass_corpus_close(test);
    strass_corpus_close(train);
    strass_space_close(space);
  } catch (const std::exception& e) {
    std::snprintf(detail, sizeof(detail), "failed: %s", e.what());
  }
  fs::remove_all(dir);
  record(4, "learning signal", ok, detail);
}

// ---------------------------------------------------------------------------
// 5. ROUGE vs exhaustive oracles
// ---------------------------------------------------------------------------
void criterion_rouge_oracles() {
  std::mt19937_64 rng(20240505);
  std::uniform_int_distribution<std::size_t> length(0, 12);
  std::uniform_int_distribution<int> letter(0, 4);

  auto random_tokens = [&]() {
    std::vector<std::string> out(length(rng));
    for (auto& t : out) t = std::string(1, static_cast<char>('a' + letter(rng)));
    return out;
  };

  std::size_t mismatches = 0;
  for (int round = 0; round < 1000; ++round) {
    auto candidate = random_tokens();
    auto reference = random_tokens();
    for (int n : {1, 2}) {
      RougeScore fast = rouge_n(candidate, reference, n);
      RougeScore slow = brute_force_rouge_n(candidate, reference, n);
      if (fast.precision != slow.precision || fast.recall != slow.recall || fast.f1 != slow.f1) {
        ++mismatches;
      }
    }
    RougeScore fast_l = rouge_l(candidate, reference);
    std::size_t lcs = brute_force_lcs(candidate, reference);
    double p = candidate.empty() ? 0.0 : static_cast<double>(lcs) / candidate.size();
    double r = reference.empty() ? 0.0 : static_cast<double>(lcs) / reference.size();
    if (fast_l.precision != p || fast_l.recall != r) ++mismatches;
  }

  std::vector<std::string> cat_cand{"the", "cat"};
  std::vector<std::string> cat_ref{"the", "cat", "sat"};
  RougeScore unigram = rouge_n(cat_cand, cat_ref, 1);
  bool hand_unigram = unigram.precision == 1.0 && std::abs(unigram.recall - 2.0 / 3.0) < 1e-12 &&
                      std::abs(unigram.f1 - 0.8) < 1e-12;
  std::vector<std::string> lcs_cand{"a", "b", "c", "d"};
  std::vector<std::string> lcs_ref{"a", "c", "b", "d"};
  RougeScore lcs_case = rouge_l(lcs_cand, lcs_ref);
  bool hand_lcs = lcs_case.precision == 0.75 && lcs_case.recall == 0.75;

  bool ok = mismatches == 0 && hand_unigram && hand_lcs;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "1000 random pairs, %zu oracle mismatches; hand cases %s", mismatches,
                hand_unigram && hand_lcs ? "reproduce" : "FAIL");
  record(5, "rouge oracle equivalence", ok, detail);
}

// ---------------------------------------------------------------------------
// 6. timing linearity through the C API (the CLI bench path)
// ---------------------------------------------------------------------------
void criterion_linearity() {
  char* table_raw = nullptr;
  bool ok = false;
  char detail[200];
  if (strass_bench("10,50,100,250,500,1000", 7, 64, 42, &table_raw) != STRASS_OK) {
    std::snprintf(detail, sizeof(detail), "bench failed: %s", strass_last_error());
    record(6, "linearity", false, detail);
    return;
  }
  std::string table(table_raw);
  strass_string_free(table_raw);

  std::vector<double> xs, ys;
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string size_cell, time_cell;
    std::getline(fields, size_cell, '\t');
    std::getline(fields, time_cell, '\t');
    xs.push_back(std::stod(size_cell));
    ys.push_back(std::stod(time_cell));
  }

  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - sy / n) * (ys[i] - sy / n);
  }
  double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
  double at_1000 = ys.back();

  ok = r2 > 0.95 && at_1000 < 1000.0 && xs.size() == 6;
  std::snprintf(detail, sizeof(detail),
                "R^2 %.4f (need > 0.95), median at 1000 sentences %.2f ms (limit 1000 ms)", r2,
                at_1000);
  record(6, "linearity", ok, detail);
}

// ---------------------------------------------------------------------------
// 7. threshold monotonicity across extractors
// ---------------------------------------------------------------------------
void criterion_threshold_monotonicity() {
  std::mt19937_64 rng(20240507);
  std::uniform_real_distribution<double> threshold(0.05, 1.0);
  AffineTransform params = AffineTransform::seeded_init(6, 99, 0.2);

  auto is_subset = [](const std::vector<std::size_t>& small,
                      const std::vector<std::size_t>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  std::size_t violations = 0;
  for (int round = 0; round < 100; ++round) {
    Document doc = random_document(rng, 6, 1, 12);
    Eigen::VectorXd ref = random_document(rng, 6, 1, 4).embedding;
    double t1 = threshold(rng);
    double t2 = threshold(rng);
    if (t1 > t2) std::swap(t1, t2);

    if (!is_subset(extract_strass(params, doc, t2).indices,
                   extract_strass(params, doc, t1).indices)) {
      ++violations;
    }
    if (!is_subset(extract_baseline(doc, t2).indices, extract_baseline(doc, t1).indices)) {
      ++violations;
    }
    if (!is_subset(extract_oracle(doc, ref, t2).indices, extract_oracle(doc, ref, t1).indices)) {
      ++violations;
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "100 documents x 3 extractors, %zu subset violations",
                violations);
  record(7, "threshold monotonicity", violations == 0, detail);
}

// ---------------------------------------------------------------------------
// 8. checkpoint round-trip and bit-identical evaluation
// ---------------------------------------------------------------------------
void criterion_checkpoint_roundtrip() {
  bool ok = false;
  char detail[200];
  try {
    SyntheticConfig config;
    config.docs = 30;
    config.sentences_per_doc = 6;
    config.dim = 12;
    config.seed = 8;
    SyntheticCorpus synthetic = generate_synthetic(config);

    Hyperparams hp;
    hp.epochs = 20;
    hp.learning_rate = 5.0;
    PreprocessOptions opts;
    TrainOnCorpusResult trained = train_on_corpus(synthetic.space, synthetic.records, hp, opts);

    std::ostringstream buffer;
    save_checkpoint(buffer, trained.params, hp);
    std::istringstream in(buffer.str());
    Checkpoint reloaded = load_checkpoint(in);
    bool bits_equal = reloaded.params == trained.params;

    EvalOptions options;
    options.bootstrap_resamples = 200;
    std::vector<std::string> names{"strass", "baseline"};
    std::string before =
        evaluation_tsv(evaluate_extractors(synthetic.space, synthetic.records, &trained.params,
                                           names, options));
    std::string after =
        evaluation_tsv(evaluate_extractors(synthetic.space, synthetic.records, &reloaded.params,
                                           names, options));
    ok = bits_equal && before == after;
    std::snprintf(detail, sizeof(detail), "weights bit-exact: %s, evaluation bit-identical: %s",
                  bits_equal ? "yes" : "NO", before == after ? "yes" : "NO");
  } catch (const std::exception& e) {
    std::snprintf(detail, sizeof(detail), "failed: %s", e.what());
  }
  record(8, "checkpoint round-trip", ok, detail);
}

}  // namespace

int main() {
  criterion_gradients();
  criterion_normalization();
  criterion_baseline_equivalence();
  criterion_learning_signal();
  criterion_rouge_oracles();
  criterion_linearity();
  criterion_threshold_monotonicity();
  criterion_checkpoint_roundtrip();

  int failed = 0;
  for (const Criterion& c : g_results) failed += c.passed ? 0 : 1;
  std::printf("%zu criteria, %d failed\n", g_results.size(), failed);
  return failed == 0 ? 0 : 1;
}
