#pragma once

// The expected logarithmic loss f(rho) = E[-log tr(A rho)] over a weighted
// finite sample, in the quantum setup (A Hermitian PSD, rho a density matrix)
// and the classical setup (a nonnegative vector, x in the simplex).

#include <cstdint>
#include <string_view>
#include <vector>

#include "logbarrier/hermitian.hpp"
#include "logbarrier/rng.hpp"
#include "logbarrier/types.hpp"

namespace logbarrier {

struct Classical {
  using Point = RealVector;
  using Sample = RealVector;
  static constexpr std::string_view name = "classical";
};

struct Quantum {
  using Point = HermitianMatrix;
  using Sample = HermitianMatrix;
  static constexpr std::string_view name = "quantum";
};

/// <a, x> or tr(A rho).
inline double inner(const RealVector& a, const RealVector& x) { return a.dot(x); }
inline double inner(const HermitianMatrix& A, const HermitianMatrix& rho) {
  return std::real(detail::trace_product(A, rho));
}

/// Weighted finite collection of loss samples. Weights are a probability
/// vector; draws for the stochastic oracle are i.i.d. with replacement.
template <class Setup>
class Dataset {
 public:
  using Sample = typename Setup::Sample;
  using Point = typename Setup::Point;

  Dataset() = default;
  /// Uniform weights 1/n.
  explicit Dataset(std::vector<Sample> samples);
  Dataset(std::vector<Sample> samples, RealVector weights);

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const Sample& sample(std::size_t i) const { return samples_[i]; }
  const RealVector& weights() const noexcept { return weights_; }

  /// Index drawn from the weight distribution.
  std::size_t draw(RngStream& rng) const;

 private:
  std::vector<Sample> samples_;
  RealVector weights_;
  std::vector<double> cumulative_;
  Eigen::Index dim_ = 0;
};

using ClassicalDataset = Dataset<Classical>;
using QuantumDataset = Dataset<Quantum>;

/// -log tr(A rho); `index` only labels the error.
template <class Sample, class Point>
double sample_loss(const Sample& s, const Point& p, std::size_t index = 0) {
  const double v = inner(s, p);
  if (!(v > kFeasibilityFloor)) throw InfeasibleSampleError(index, v);
  return -std::log(v);
}

/// -A / tr(A rho).
template <class Sample, class Point>
Sample sample_grad(const Sample& s, const Point& p, std::size_t index = 0) {
  const double v = inner(s, p);
  if (!(v > kFeasibilityFloor)) throw InfeasibleSampleError(index, v);
  return -s / v;
}

template <class Setup>
double f_value(const Dataset<Setup>& ds, const typename Setup::Point& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double w = ds.weights()(static_cast<Eigen::Index>(i));
    if (w == 0.0) continue;
    acc += w * sample_loss(ds.sample(i), p, i);
  }
  return acc;
}

template <class Setup>
typename Setup::Point f_grad(const Dataset<Setup>& ds, const typename Setup::Point& p) {
  typename Setup::Point g = Setup::Point::Zero(p.rows(), p.cols());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double w = ds.weights()(static_cast<Eigen::Index>(i));
    if (w == 0.0) continue;
    const double v = inner(ds.sample(i), p);
    if (!(v > kFeasibilityFloor)) throw InfeasibleSampleError(i, v);
    g -= (w / v) * ds.sample(i);
  }
  return g;
}

template <class Setup>
struct GradEstimate {
  typename Setup::Point g;
  int batch_size = 1;
  std::vector<std::size_t> source_indices;
};

/// Oracle O_B: average of B per-sample gradients drawn i.i.d. from the
/// weights. Unbiased for f_grad, dual local norm <= 1, variance <= 4/B.
template <class Setup>
GradEstimate<Setup> minibatch_gradient(const Dataset<Setup>& ds, const typename Setup::Point& p,
                                       int batch_size, RngStream& rng) {
  if (batch_size < 1) throw std::invalid_argument("minibatch_gradient: batch size must be >= 1");
  GradEstimate<Setup> out;
  out.batch_size = batch_size;
  out.source_indices.reserve(static_cast<std::size_t>(batch_size));
  out.g = Setup::Point::Zero(p.rows(), p.cols());
  const double inv_b = 1.0 / batch_size;
  for (int b = 0; b < batch_size; ++b) {
    const std::size_t i = ds.draw(rng);
    out.source_indices.push_back(i);
    const double v = inner(ds.sample(i), p);
    if (!(v > kFeasibilityFloor)) throw InfeasibleSampleError(i, v);
    out.g -= (inv_b / v) * ds.sample(i);
  }
  return out;
}

/// Oracle constants of O_B: gradient bound G and variance bound sigma^2.
struct OracleContract {
  double G = 1.0;
  double sigma2 = 4.0;
};
inline OracleContract minibatch_contract(int batch_size) { return {1.0, 4.0 / batch_size}; }

/// Diagonal quantum image of a classical dataset (diag(a_i) per sample).
QuantumDataset diagonal_embedding(const ClassicalDataset& ds);

}  // namespace logbarrier
