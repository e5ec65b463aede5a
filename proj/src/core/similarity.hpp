#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace strass {

/// Below this population standard deviation the per-document normalization is
/// degenerate: every score becomes 0.5, then 1.0 after max-division, so every
/// sentence ties and the at-least-one-sentence guarantee holds.
inline constexpr double kStdFloor = 1e-12;

/// dot(x,y)/(|x||y|), clamped into [-1,1]. Throws ZeroVector on zero norms.
double cos_sim(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// (cos_sim + 1) / 2, into [0,1].
double cos_plus(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Every intermediate of the cos+ -> rcos+ -> ncos+ chain for one document.
/// Training and inference share this so their scores agree bit for bit.
struct NormalizationTrace {
  std::vector<double> cos;        // raw cosine per element of X
  std::vector<double> cos_plus;   // rescaled into [0,1]
  double mean = 0.0;              // mean of cos_plus
  double stddev = 0.0;            // population std of cos_plus
  bool degenerate_std = false;    // stddev below kStdFloor
  std::vector<double> rcos;       // centered at 0.5, unit std
  std::size_t argmax = 0;         // first index attaining the max rcos
  double max_rcos = 0.0;
  std::vector<double> ncos;       // rcos / max_rcos, max exactly 1
};

NormalizationTrace normalize_chain(std::span<const Eigen::VectorXd> X, const Eigen::VectorXd& y);

/// 0.5 + (cos+ - mean)/std per element; all 0.5 when std < kStdFloor.
std::vector<double> rcos_plus(std::span<const Eigen::VectorXd> X, const Eigen::VectorXd& y);

/// rcos+ divided by its max over X; the closest element scores exactly 1.
std::vector<double> ncos_plus(std::span<const Eigen::VectorXd> X, const Eigen::VectorXd& y);

}  // namespace strass
