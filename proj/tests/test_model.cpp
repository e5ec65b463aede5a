#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "core/error.hpp"
#include "core/model.hpp"
#include "support/oracles.hpp"

using namespace strass;
using namespace strass::testing;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("transform basics") {
  AffineTransform identity = AffineTransform::identity(2);
  Eigen::VectorXd d = vec2(0.3, -0.7);
  CHECK(transform(identity, d) == d);

  AffineTransform constant{Eigen::MatrixXd::Zero(2, 2), vec2(1, 1)};
  CHECK(transform(constant, d) == vec2(1, 1));

  AffineTransform diag{2.0 * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)};
  CHECK(transform(diag, vec2(1, 3)) == vec2(2, 6));

  Eigen::VectorXd wrong(3);
  wrong << 1, 2, 3;
  CHECK_THROWS_AS(transform(identity, wrong), Error);
}

TEST_CASE("select_soft is the shifted sigmoid") {
  std::vector<double> scores{0.8, 1.0, 0.2};
  auto sel = select_soft(scores, 0.8, 1.0);
  CHECK(sel[0] == 0.5);
  CHECK(sel[1] == doctest::Approx(0.549833997312478).epsilon(1e-15));
  CHECK(sel[2] < 0.5);

  auto sharp = select_soft(scores, 0.8, 200.0);
  CHECK(sharp[1] > 0.999999);
  CHECK(sharp[2] < 1e-6);
}

TEST_CASE("select_soft slope at the threshold scales with steepness") {
  const double h = 1e-6;
  for (double k : {1.0, 2.0, 5.0}) {
    std::vector<double> up{0.8 + h};
    std::vector<double> down{0.8 - h};
    double slope = (select_soft(up, 0.8, k)[0] - select_soft(down, 0.8, k)[0]) / (2 * h);
    CHECK(slope == doctest::Approx(k / 4.0).epsilon(1e-6));
  }
}

TEST_CASE("approximate_summary weighted sum") {
  std::vector<SentenceItem> sentences{{vec2(1, 0), 2.0}, {vec2(0, 1), 4.0}};
  std::vector<double> sel{0.6, 0.5};
  Eigen::VectorXd app = approximate_summary(sentences, sel);
  CHECK(app[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(app[1] == doctest::Approx(2.0).epsilon(1e-15));

  std::vector<SentenceItem> single{{vec2(3, 4), 5.0}};
  std::vector<double> sigma{0.25};
  Eigen::VectorXd one = approximate_summary(single, sigma);
  CHECK(cos_sim(one, single[0].embedding) == doctest::Approx(1.0));

  std::vector<SentenceItem> twins{{vec2(1, 1), 2.0}, {vec2(1, 1), 3.0}};
  std::vector<double> half{0.5, 0.5};
  CHECK(cos_sim(approximate_summary(twins, half), vec2(1, 1)) == doctest::Approx(1.0));

  std::vector<double> zeros{0.0};
  CHECK_THROWS_AS(approximate_summary(single, zeros), Error);
}

TEST_CASE("loss arithmetic") {
  Eigen::VectorXd g = vec2(1, 2);
  CHECK(loss(g, g, 10.0, 20.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(loss(g, vec2(0, 5), 20.0, 20.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  // lambda 0.3, ratio 0.2, cos 0.5
  Eigen::VectorXd a = vec2(1, 0);
  Eigen::VectorXd b = vec2(1, std::sqrt(3.0));  // 60 degrees, cos 0.5
  CHECK(loss(a, b, 4.0, 20.0, 0.3) == doctest::Approx(-0.29).epsilon(1e-12));
  CHECK(loss(a, b, 4.0, 20.0, 0.3, LossForm::Printed) == doctest::Approx(0.41).epsilon(1e-12));
}

TEST_CASE("loss ranges at the lambda extremes") {
  std::mt19937_64 rng(41);
  Hyperparams hp;
  for (int round = 0; round < 50; ++round) {
    TrainingExample example = random_example(rng, 6);
    AffineTransform params = AffineTransform::seeded_init(6, round);
    hp.lambda = 0.0;
    double l0 = forward(params, example, hp).loss;
    CHECK(l0 >= -1.0);
    CHECK(l0 <= 1.0);
    hp.lambda = 1.0;
    double l1 = forward(params, example, hp).loss;
    CHECK(l1 >= 0.0);
    CHECK(l1 <= 1.0);
  }
  hp.lambda = 0.3;
}

TEST_CASE("forward matches the straight-line reference") {
  std::mt19937_64 rng(43);
  Hyperparams hp;
  for (int round = 0; round < 50; ++round) {
    TrainingExample example = random_example(rng, 8, 5, 5);
    AffineTransform params = AffineTransform::seeded_init(8, 1000 + round, 0.05);
    hp.threshold = 0.6 + 0.05 * (round % 7);
    hp.lambda = (round % 3) * 0.3;
    for (LossForm form : {LossForm::Negated, LossForm::Printed}) {
      double expected = reference_loss(params, example, hp, form);
      double actual = forward(params, example, hp, form).loss;
      CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward is deterministic") {
  std::mt19937_64 rng(47);
  TrainingExample example = random_example(rng, 8);
  AffineTransform params = AffineTransform::seeded_init(8, 7);
  Hyperparams hp;
  double first = forward(params, example, hp).loss;
  for (int i = 0; i < 5; ++i) CHECK(forward(params, example, hp).loss == first);
}

TEST_CASE("identity forward scores equal the baseline chain exactly") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 30; ++round) {
    TrainingExample example = random_example(rng, 6);
    AffineTransform identity = AffineTransform::identity(6);
    Hyperparams hp;
    ForwardTrace trace = forward(identity, example, hp);
    std::vector<Eigen::VectorXd> embeddings;
    for (const auto& s : example.sentences) embeddings.push_back(s.embedding);
    auto baseline_scores = ncos_plus(embeddings, example.document);
    REQUIRE(trace.norm.ncos.size() == baseline_scores.size());
    for (std::size_t i = 0; i < baseline_scores.size(); ++i) {
      CHECK(trace.norm.ncos[i] == baseline_scores[i]);
    }
  }
}

TEST_CASE("backward matches central finite differences") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> threshold(0.6, 0.9);
  const double lambdas[] = {0.0, 0.3, 1.0};
  for (int round = 0; round < 8; ++round) {
    TrainingExample example = random_example(rng, 8);
    AffineTransform params = AffineTransform::seeded_init(8, 2000 + round, 0.05);
    Hyperparams hp;
    hp.threshold = threshold(rng);
    hp.lambda = lambdas[round % 3];
    for (LossForm form : {LossForm::Negated, LossForm::Printed}) {
      ForwardTrace trace = forward(params, example, hp, form);
      Gradients analytic = backward(params, example, hp, trace, form);
      Gradients numeric = finite_difference_gradients(params, example, hp, 1e-5, form);
      CHECK(gradient_disagreement(analytic, numeric) < 1e-4);
    }
  }
}

TEST_CASE("backward along a random direction") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> normal(0.0, 1.0);
  TrainingExample example = random_example(rng, 8);
  AffineTransform params = AffineTransform::seeded_init(8, 77, 0.05);
  Hyperparams hp;
  ForwardTrace trace = forward(params, example, hp);
  Gradients analytic = backward(params, example, hp, trace);

  Eigen::MatrixXd dir_w(8, 8);
  Eigen::VectorXd dir_b(8);
  for (int r = 0; r < 8; ++r) {
    dir_b[r] = normal(rng);
    for (int c = 0; c < 8; ++c) dir_w(r, c) = normal(rng);
  }
  const double eps = 1e-5;
  AffineTransform up{params.weight + eps * dir_w, params.bias + eps * dir_b};
  AffineTransform down{params.weight - eps * dir_w, params.bias - eps * dir_b};
  double numeric = (forward(up, example, hp).loss - forward(down, example, hp).loss) / (2 * eps);
  double analytic_dir = (analytic.weight.array() * dir_w.array()).sum() + analytic.bias.dot(dir_b);
  CHECK(analytic_dir == doctest::Approx(numeric).epsilon(1e-6));
}

TEST_CASE("backward is zero when the spread is degenerate") {
  // every sentence identical: std of cos+ is 0, selection is flat
  TrainingExample example;
  example.document = vec2(1, 0);
  example.reference = vec2(0, 1);
  example.sentences = {{vec2(1, 1), 2.0}, {vec2(2, 2), 3.0}, {vec2(0.5, 0.5), 1.0}};
  example.doc_word_count = 6.0;
  AffineTransform params = AffineTransform::identity(2);
  Hyperparams hp;
  ForwardTrace trace = forward(params, example, hp);
  CHECK(trace.norm.degenerate_std);
  Gradients grads = backward(params, example, hp, trace);
  CHECK(grads.weight.norm() == 0.0);
  CHECK(grads.bias.norm() == 0.0);
}

TEST_CASE("train with zero learning rate leaves parameters unchanged") {
  std::mt19937_64 rng(67);
  std::vector<TrainingExample> corpus{random_example(rng, 4), random_example(rng, 4)};
  Hyperparams hp;
  hp.learning_rate = 0.0;
  hp.epochs = 5;
  hp.seed = 9;
  TrainResult result = train(corpus, hp);
  CHECK(result.params == AffineTransform::seeded_init(4, 9));
  REQUIRE(result.epoch_mean_loss.size() == 5);
  for (double l : result.epoch_mean_loss) CHECK(l == result.epoch_mean_loss.front());
}

TEST_CASE("train descends on a planted synthetic corpus") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<TrainingExample> corpus;
  for (int doc = 0; doc < 20; ++doc) {
    TrainingExample example = random_example(rng, 6, 4, 6);
    example.reference = example.sentences[0].embedding;  // summary is sentence 0
    corpus.push_back(std::move(example));
  }
  Hyperparams hp;
  hp.epochs = 40;
  hp.learning_rate = 2.0;
  for (TrainMode mode : {TrainMode::FullBatch, TrainMode::PerExample}) {
    TrainResult result = train(corpus, hp, mode);
    CHECK(result.epoch_mean_loss.back() < result.epoch_mean_loss.front());
  }
}

TEST_CASE("train single example with tiny rate is non-increasing") {
  std::mt19937_64 rng(73);
  std::vector<TrainingExample> corpus{random_example(rng, 5)};
  Hyperparams hp;
  hp.epochs = 10;
  hp.learning_rate = 1e-4;
  TrainResult result = train(corpus, hp);
  for (std::size_t i = 1; i < result.epoch_mean_loss.size(); ++i) {
    CHECK(result.epoch_mean_loss[i] <= result.epoch_mean_loss[i - 1] + 1e-12);
  }
}

TEST_CASE("train aborts on divergence") {
  std::mt19937_64 rng(79);
  std::vector<TrainingExample> corpus{random_example(rng, 4)};
  Hyperparams hp;
  hp.epochs = 50;
  hp.learning_rate = 1e300;
  try {
    train(corpus, hp);
    FAIL("expected NonFiniteLoss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteLoss);
  }
}

TEST_CASE("checkpoint round-trip is bit exact") {
  AffineTransform params = AffineTransform::seeded_init(5, 123);
  params.bias[2] = 1.0 / 3.0;
  Hyperparams hp;
  hp.threshold = 0.73;
  hp.lambda = 1.0 / 7.0;
  hp.learning_rate = 0.05;
  hp.epochs = 17;
  hp.seed = 99;

  std::ostringstream out;
  save_checkpoint(out, params, hp);
  std::istringstream in(out.str());
  Checkpoint loaded = load_checkpoint(in);

  CHECK(loaded.params == params);
  CHECK(loaded.hyper.threshold == hp.threshold);
  CHECK(loaded.hyper.lambda == hp.lambda);
  CHECK(loaded.hyper.steepness == hp.steepness);
  CHECK(loaded.hyper.learning_rate == hp.learning_rate);
  CHECK(loaded.hyper.epochs == hp.epochs);
  CHECK(loaded.hyper.seed == hp.seed);
}

TEST_CASE("checkpoint error paths") {
  AffineTransform params = AffineTransform::identity(3);
  Hyperparams hp;
  std::ostringstream out;
  save_checkpoint(out, params, hp);
  std::string text = out.str();

  {
    std::istringstream in(text.substr(0, text.size() / 2));
    try {
      load_checkpoint(in);
      FAIL("expected MalformedCheckpoint");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedCheckpoint);
    }
  }
  {
    std::string wrong = text;
    wrong.replace(wrong.find("v1"), 2, "v9");
    std::istringstream in(wrong);
    try {
      load_checkpoint(in);
      FAIL("expected VersionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::VersionMismatch);
    }
  }
  {
    std::istringstream in("garbage\n");
    CHECK_THROWS_AS(load_checkpoint(in), Error);
  }
  {
    // checkpoint dim 3 applied to a dim-2 vector fails at the use site
    std::istringstream in(text);
    Checkpoint loaded = load_checkpoint(in);
    Eigen::VectorXd d(2);
    d << 1, 2;
    try {
      transform(loaded.params, d);
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
  }
}

TEST_CASE("make_training_example drops degenerate sentences") {
  std::istringstream in("2 2\naa 1 0\nbb 0 1\n");
  EmbeddingSpace space = EmbeddingSpace::load(in);
  PreprocessOptions opts;
  Document doc = build_document(space, "aa bb. zz qq. bb aa bb.", opts);
  REQUIRE(doc.sentences.size() == 3);
  CHECK(doc.usable == std::vector<std::size_t>{0, 2});

  TrainingExample example = make_training_example(space, doc, "aa bb", opts);
  CHECK(example.sentences.size() == 2);
  CHECK(example.doc_word_count == 5.0);  // degenerate middle sentence excluded

  try {
    make_training_example(space, doc, "zz", opts);
    FAIL("expected ZeroVector for a degenerate reference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
}
