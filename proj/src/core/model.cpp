#include "core/model.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "core/error.hpp"

namespace strass {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double similarity_sign(LossForm form) { return form == LossForm::Negated ? -1.0 : 1.0; }

void write_real(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

AffineTransform AffineTransform::identity(int dim) {
  if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
}

AffineTransform AffineTransform::seeded_init(int dim, std::uint64_t seed, double noise_sigma) {
  AffineTransform params = identity(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) params.weight(r, c) += noise(rng);
  }
  return params;
}

bool AffineTransform::operator==(const AffineTransform& other) const {
  return weight.rows() == other.weight.rows() && weight.cols() == other.weight.cols() &&
         bias.size() == other.bias.size() && weight == other.weight && bias == other.bias;
}

void Hyperparams::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be in (0, 1]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be in [0, 1]");
  }
  if (!(steepness > 0.0)) throw Error(ErrorCode::InvalidArgument, "steepness must be positive");
  if (!(learning_rate >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be nonnegative");
  }
  if (epochs < 0) throw Error(ErrorCode::InvalidArgument, "epochs must be nonnegative");
}

TrainingExample make_training_example(const EmbeddingSpace& space, const Document& doc,
                                      std::string_view summary_raw,
                                      const PreprocessOptions& opts) {
  if (doc.usable.empty()) {
    throw Error(ErrorCode::NoUsableSentences, "document has no in-vocabulary sentence");
  }
  if (doc.degenerate) {
    throw Error(ErrorCode::ZeroVector, "document embedding is degenerate");
  }

  std::string summary_text = preprocess(summary_raw, opts);
  EmbedResult reference = embed_tokens(space, tokenize(summary_text));
  if (reference.degenerate) {
    throw Error(ErrorCode::ZeroVector, "reference summary embedding is degenerate");
  }

  TrainingExample example;
  example.document = doc.embedding;
  example.reference = std::move(reference.vector);
  example.sentences.reserve(doc.usable.size());
  double total = 0.0;
  for (std::size_t i : doc.usable) {
    const EmbeddedSentence& s = doc.sentences[i];
    example.sentences.push_back({s.embedding, static_cast<double>(s.span.word_count)});
    total += static_cast<double>(s.span.word_count);
  }
  example.doc_word_count = total;
  return example;
}

Eigen::VectorXd transform(const AffineTransform& params, const Eigen::VectorXd& d) {
  if (params.weight.cols() != d.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "transform of dimension " + std::to_string(d.size()) + " with a " +
                    std::to_string(params.weight.rows()) + "x" +
                    std::to_string(params.weight.cols()) + " weight matrix");
  }
  return params.weight * d + params.bias;
}

std::vector<double> select_soft(std::span<const double> scores, double threshold,
                                double steepness) {
  std::vector<double> sel;
  sel.reserve(scores.size());
  for (double score : scores) sel.push_back(sigmoid(steepness * (score - threshold)));
  return sel;
}

Eigen::VectorXd approximate_summary(std::span<const SentenceItem> sentences,
                                    std::span<const double> sel) {
  if (sentences.size() != sel.size()) {
    throw Error(ErrorCode::DimensionMismatch, "selection and sentence list sizes differ");
  }
  if (sentences.empty()) throw Error(ErrorCode::EmptySet, "no sentences to approximate");
  bool any = false;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(sentences[0].embedding.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sel[i] != 0.0) any = true;
    sum += sentences[i].embedding * (sentences[i].word_count * sel[i]);
  }
  if (!any) throw Error(ErrorCode::AllZeroSelection, "every selection weight is zero");
  return sum;
}

double loss(const Eigen::VectorXd& gen_sum, const Eigen::VectorXd& ref_sum,
            double soft_word_count, double doc_word_count, double lambda, LossForm form) {
  if (doc_word_count <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "document word count must be positive");
  }
  double ratio = soft_word_count / doc_word_count;
  return lambda * ratio + similarity_sign(form) * (1.0 - lambda) * cos_sim(gen_sum, ref_sum);
}

ForwardTrace forward(const AffineTransform& params, const TrainingExample& example,
                     const Hyperparams& hp, LossForm form) {
  ForwardTrace trace;
  trace.transformed = transform(params, example.document);

  std::vector<Eigen::VectorXd> embeddings;
  embeddings.reserve(example.sentences.size());
  for (const SentenceItem& s : example.sentences) embeddings.push_back(s.embedding);
  trace.norm = normalize_chain(embeddings, trace.transformed);

  trace.sel = select_soft(trace.norm.ncos, hp.threshold, hp.steepness);
  trace.gen_sum = approximate_summary(example.sentences, trace.sel);
  trace.soft_word_count = 0.0;
  for (std::size_t i = 0; i < trace.sel.size(); ++i) {
    trace.soft_word_count += example.sentences[i].word_count * trace.sel[i];
  }
  trace.similarity = cos_sim(trace.gen_sum, example.reference);
  double ratio = trace.soft_word_count / example.doc_word_count;
  trace.loss = hp.lambda * ratio + similarity_sign(form) * (1.0 - hp.lambda) * trace.similarity;
  return trace;
}

Gradients backward(const AffineTransform& params, const TrainingExample& example,
                   const Hyperparams& hp, const ForwardTrace& trace, LossForm form) {
  const int dim = params.dim();
  const std::size_t m = example.sentences.size();
  Gradients grads{Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim)};

  // Below the std floor the whole selection is constant in y, so the loss has
  // zero gradient with respect to the parameters.
  if (trace.norm.degenerate_std) return grads;

  const double sign = similarity_sign(form);
  const double k = hp.steepness;
  const Eigen::VectorXd& y = trace.transformed;
  const Eigen::VectorXd& a = trace.gen_sum;
  const Eigen::VectorXd& r = example.reference;
  const double ny = y.norm();
  const double na = a.norm();
  const double nr = r.norm();
  const double q = trace.similarity;

  // dq/da for q = cos(a, r).
  Eigen::VectorXd dq_da = r / (na * nr) - (q / (na * na)) * a;

  // u_i = dL/d(ncos_i) through sel and the two loss terms.
  std::vector<double> u(m);
  for (std::size_t i = 0; i < m; ++i) {
    const SentenceItem& s = example.sentences[i];
    double dL_dg = hp.lambda * s.word_count / example.doc_word_count +
                   sign * (1.0 - hp.lambda) * s.word_count * s.embedding.dot(dq_da);
    double g = trace.sel[i];
    u[i] = dL_dg * k * g * (1.0 - g);
  }

  // Through the max-division: ncos_i = rcos_i / max, the argmax routes the
  // extra -sum(u_i * rcos_i)/max^2 term.
  const double M = trace.norm.max_rcos;
  std::vector<double> d_rho(m);
  double weighted = 0.0;
  for (std::size_t i = 0; i < m; ++i) weighted += u[i] * trace.norm.rcos[i];
  for (std::size_t i = 0; i < m; ++i) d_rho[i] = u[i] / M;
  d_rho[trace.norm.argmax] -= weighted / (M * M);

  // Through centering and the population std.
  const double sd = trace.norm.stddev;
  const double dm = static_cast<double>(m);
  double A = 0.0;
  double B = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    A += d_rho[i];
    B += d_rho[i] * (trace.norm.cos_plus[i] - trace.norm.mean);
  }
  std::vector<double> d_cos(m);
  for (std::size_t i = 0; i < m; ++i) {
    double e = trace.norm.cos_plus[i] - trace.norm.mean;
    double d_p = (d_rho[i] - A / dm) / sd - e * B / (dm * sd * sd * sd);
    d_cos[i] = d_p / 2.0;  // cos+ = (cos + 1)/2
  }

  // Through each per-sentence cosine into y.
  Eigen::VectorXd d_y = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXd& s = example.sentences[i].embedding;
    double ns = s.norm();
    d_y += d_cos[i] * (s / (ns * ny) - (trace.norm.cos[i] / (ny * ny)) * y);
  }

  grads.weight = d_y * example.document.transpose();
  grads.bias = std::move(d_y);
  return grads;
}

TrainResult train(std::span<const TrainingExample> corpus, const Hyperparams& hp, TrainMode mode,
                  LossForm form) {
  hp.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptySet, "training corpus is empty");
  const int dim = static_cast<int>(corpus.front().document.size());

  TrainResult result;
  result.params = AffineTransform::seeded_init(dim, hp.seed);
  result.epoch_mean_loss.reserve(static_cast<std::size_t>(hp.epochs));

  auto check_finite = [&](double value, int epoch, std::size_t index) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFiniteLoss,
                  "non-finite loss at epoch " + std::to_string(epoch) + ", example " +
                      std::to_string(index));
    }
  };

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    double loss_sum = 0.0;
    if (mode == TrainMode::FullBatch) {
      Eigen::MatrixXd grad_w = Eigen::MatrixXd::Zero(dim, dim);
      Eigen::VectorXd grad_b = Eigen::VectorXd::Zero(dim);
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        ForwardTrace trace = forward(result.params, corpus[i], hp, form);
        check_finite(trace.loss, epoch, i);
        loss_sum += trace.loss;
        Gradients g = backward(result.params, corpus[i], hp, trace, form);
        grad_w += g.weight;
        grad_b += g.bias;
      }
      double scale = hp.learning_rate / static_cast<double>(corpus.size());
      result.params.weight -= scale * grad_w;
      result.params.bias -= scale * grad_b;
    } else {
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        ForwardTrace trace = forward(result.params, corpus[i], hp, form);
        check_finite(trace.loss, epoch, i);
        loss_sum += trace.loss;
        Gradients g = backward(result.params, corpus[i], hp, trace, form);
        result.params.weight -= hp.learning_rate * g.weight;
        result.params.bias -= hp.learning_rate * g.bias;
      }
    }
    if (!result.params.weight.allFinite() || !result.params.bias.allFinite()) {
      throw Error(ErrorCode::NonFiniteLoss,
                  "parameters diverged at epoch " + std::to_string(epoch) +
                      "; lower the learning rate");
    }
    result.epoch_mean_loss.push_back(loss_sum / static_cast<double>(corpus.size()));
  }
  return result;
}

namespace {

constexpr const char* kCheckpointMagic = "strass-checkpoint";
constexpr const char* kCheckpointVersion = "v1";

std::string read_line_or_throw(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedCheckpoint, "truncated checkpoint");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double parse_checkpoint_real(const std::string& text) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedCheckpoint, "bad numeric field '" + text + "'");
  }
}

std::pair<std::string, std::string> split_key_value(const std::string& line) {
  std::size_t tab = line.find('\t');
  if (tab == std::string::npos) {
    throw Error(ErrorCode::MalformedCheckpoint, "expected 'key<TAB>value', got '" + line + "'");
  }
  return {line.substr(0, tab), line.substr(tab + 1)};
}

}  // namespace

void save_checkpoint(std::ostream& out, const AffineTransform& params, const Hyperparams& hp) {
  const int dim = params.dim();
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "dim\t" << dim << '\n';
  out << "threshold\t";
  write_real(out, hp.threshold);
  out << "\nlambda\t";
  write_real(out, hp.lambda);
  out << "\nsteepness\t";
  write_real(out, hp.steepness);
  out << "\nlearning_rate\t";
  write_real(out, hp.learning_rate);
  out << "\nepochs\t" << hp.epochs << '\n';
  out << "seed\t" << hp.seed << '\n';
  out << "W\n";
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      if (c > 0) out << ' ';
      write_real(out, params.weight(r, c));
    }
    out << '\n';
  }
  out << "b\n";
  for (int i = 0; i < dim; ++i) {
    if (i > 0) out << ' ';
    write_real(out, params.bias[i]);
  }
  out << '\n';
}

Checkpoint load_checkpoint(std::istream& in) {
  std::string header = read_line_or_throw(in);
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != kCheckpointMagic) {
    throw Error(ErrorCode::MalformedCheckpoint, "not a checkpoint file");
  }
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "checkpoint version '" + version + "', expected '" + kCheckpointVersion + "'");
  }

  Checkpoint ckpt;
  int dim = -1;
  for (const char* expected :
       {"dim", "threshold", "lambda", "steepness", "learning_rate", "epochs", "seed"}) {
    auto [key, value] = split_key_value(read_line_or_throw(in));
    if (key != expected) {
      throw Error(ErrorCode::MalformedCheckpoint,
                  "expected field '" + std::string(expected) + "', got '" + key + "'");
    }
    if (key == "dim") {
      dim = static_cast<int>(parse_checkpoint_real(value));
      if (dim <= 0) throw Error(ErrorCode::MalformedCheckpoint, "nonpositive dimension");
    } else if (key == "threshold") {
      ckpt.hyper.threshold = parse_checkpoint_real(value);
    } else if (key == "lambda") {
      ckpt.hyper.lambda = parse_checkpoint_real(value);
    } else if (key == "steepness") {
      ckpt.hyper.steepness = parse_checkpoint_real(value);
    } else if (key == "learning_rate") {
      ckpt.hyper.learning_rate = parse_checkpoint_real(value);
    } else if (key == "epochs") {
      ckpt.hyper.epochs = static_cast<int>(parse_checkpoint_real(value));
    } else {
      try {
        ckpt.hyper.seed = static_cast<std::uint64_t>(std::stoull(value));
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedCheckpoint, "bad seed field '" + value + "'");
      }
    }
  }

  if (read_line_or_throw(in) != "W") {
    throw Error(ErrorCode::MalformedCheckpoint, "expected weight matrix marker 'W'");
  }
  ckpt.params.weight.resize(dim, dim);
  for (int r = 0; r < dim; ++r) {
    std::istringstream row(read_line_or_throw(in));
    std::string field;
    for (int c = 0; c < dim; ++c) {
      if (!(row >> field)) {
        throw Error(ErrorCode::MalformedCheckpoint, "short weight row " + std::to_string(r));
      }
      ckpt.params.weight(r, c) = parse_checkpoint_real(field);
    }
    if (row >> field) {
      throw Error(ErrorCode::MalformedCheckpoint, "trailing data in weight row " + std::to_string(r));
    }
  }
  if (read_line_or_throw(in) != "b") {
    throw Error(ErrorCode::MalformedCheckpoint, "expected bias marker 'b'");
  }
  ckpt.params.bias.resize(dim);
  {
    std::istringstream row(read_line_or_throw(in));
    std::string field;
    for (int i = 0; i < dim; ++i) {
      if (!(row >> field)) throw Error(ErrorCode::MalformedCheckpoint, "short bias line");
      ckpt.params.bias[i] = parse_checkpoint_real(field);
    }
  }
  return ckpt;
}

}  // namespace strass
