#include "core/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace strass {

double cos_sim(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cosine of vectors with dimensions " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  }
  double nx = x.norm();
  double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  }
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

double cos_plus(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return (cos_sim(x, y) + 1.0) / 2.0;
}

NormalizationTrace normalize_chain(std::span<const Eigen::VectorXd> X, const Eigen::VectorXd& y) {
  if (X.empty()) throw Error(ErrorCode::EmptySet, "normalization over an empty sentence set");
  const std::size_t m = X.size();

  NormalizationTrace trace;
  trace.cos.reserve(m);
  trace.cos_plus.reserve(m);
  for (const Eigen::VectorXd& x : X) {
    double c = cos_sim(x, y);
    trace.cos.push_back(c);
    trace.cos_plus.push_back((c + 1.0) / 2.0);
  }

  double sum = 0.0;
  for (double p : trace.cos_plus) sum += p;
  trace.mean = sum / static_cast<double>(m);
  double var = 0.0;
  for (double p : trace.cos_plus) {
    double e = p - trace.mean;
    var += e * e;
  }
  trace.stddev = std::sqrt(var / static_cast<double>(m));
  trace.degenerate_std = trace.stddev < kStdFloor;

  trace.rcos.resize(m);
  if (trace.degenerate_std) {
    std::fill(trace.rcos.begin(), trace.rcos.end(), 0.5);
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      trace.rcos[i] = 0.5 + (trace.cos_plus[i] - trace.mean) / trace.stddev;
    }
  }

  trace.argmax = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (trace.rcos[i] > trace.rcos[trace.argmax]) trace.argmax = i;
  }
  trace.max_rcos = trace.rcos[trace.argmax];

  trace.ncos.resize(m);
  for (std::size_t i = 0; i < m; ++i) trace.ncos[i] = trace.rcos[i] / trace.max_rcos;
  return trace;
}

std::vector<double> rcos_plus(std::span<const Eigen::VectorXd> X, const Eigen::VectorXd& y) {
  return normalize_chain(X, y).rcos;
}

std::vector<double> ncos_plus(std::span<const Eigen::VectorXd> X, const Eigen::VectorXd& y) {
  return normalize_chain(X, y).ncos;
}

}  // namespace strass
