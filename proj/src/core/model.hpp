#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "core/document.hpp"
#include "core/similarity.hpp"

namespace strass {

/// The only trainable parameters: a square weight matrix and a bias.
struct AffineTransform {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  static AffineTransform identity(int dim);
  /// Identity plus seeded Gaussian noise on the weights, zero bias: the model
  /// starts at the untrained baseline.
  static AffineTransform seeded_init(int dim, std::uint64_t seed, double noise_sigma = 0.01);

  int dim() const { return static_cast<int>(bias.size()); }
  bool operator==(const AffineTransform& other) const;
};

struct Hyperparams {
  double threshold = 0.8;   // t, selection threshold in (0, 1]
  double lambda = 0.3;      // trade-off between compression ratio and similarity
  double steepness = 1.0;   // sigmoid steepness k; 1 is the plain sigmoid
  double learning_rate = 0.5;
  int epochs = 100;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Negated trains toward the reference (higher similarity lowers the loss);
/// Printed keeps the similarity term positive, for A/B comparison.
enum class LossForm { Negated, Printed };

struct SentenceItem {
  Eigen::VectorXd embedding;
  double word_count = 0.0;
};

struct TrainingExample {
  Eigen::VectorXd document;             // d
  std::vector<SentenceItem> sentences;  // S, degenerate sentences already dropped
  Eigen::VectorXd reference;            // ref_sum
  double doc_word_count = 0.0;          // == sum of sentence word counts
};

/// Builds a training example from a document and its reference summary text.
/// Throws NoUsableSentences / ZeroVector when either side is degenerate.
TrainingExample make_training_example(const EmbeddingSpace& space, const Document& doc,
                                      std::string_view summary_raw, const PreprocessOptions& opts);

Eigen::VectorXd transform(const AffineTransform& params, const Eigen::VectorXd& d);

/// Elementwise sigmoid(steepness * (score - threshold)).
std::vector<double> select_soft(std::span<const double> scores, double threshold,
                                double steepness);

/// Sum of embedding * word_count * sel, unnormalized; the cosine downstream is
/// scale-invariant.
Eigen::VectorXd approximate_summary(std::span<const SentenceItem> sentences,
                                    std::span<const double> sel);

double loss(const Eigen::VectorXd& gen_sum, const Eigen::VectorXd& ref_sum,
            double soft_word_count, double doc_word_count, double lambda,
            LossForm form = LossForm::Negated);

struct ForwardTrace {
  Eigen::VectorXd transformed;  // f(d)
  NormalizationTrace norm;
  std::vector<double> sel;
  Eigen::VectorXd gen_sum;
  double soft_word_count = 0.0;
  double similarity = 0.0;  // cos_sim(gen_sum, ref_sum)
  double loss = 0.0;
};

ForwardTrace forward(const AffineTransform& params, const TrainingExample& example,
                     const Hyperparams& hp, LossForm form = LossForm::Negated);

struct Gradients {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Exact analytic gradients of the composed loss with respect to W and b.
Gradients backward(const AffineTransform& params, const TrainingExample& example,
                   const Hyperparams& hp, const ForwardTrace& trace,
                   LossForm form = LossForm::Negated);

enum class TrainMode { FullBatch, PerExample };

struct TrainResult {
  AffineTransform params;
  std::vector<double> epoch_mean_loss;
};

TrainResult train(std::span<const TrainingExample> corpus, const Hyperparams& hp,
                  TrainMode mode = TrainMode::FullBatch, LossForm form = LossForm::Negated);

/// Text checkpoint: version, dimension, hyperparameters, then W row-major and
/// b as decimals with 17 significant digits (round-trip exact for doubles).
void save_checkpoint(std::ostream& out, const AffineTransform& params, const Hyperparams& hp);

struct Checkpoint {
  AffineTransform params;
  Hyperparams hyper;
};

Checkpoint load_checkpoint(std::istream& in);

}  // namespace strass
