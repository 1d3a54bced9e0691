#include "logbarrier/logloss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace logbarrier {
namespace {

void validate_sample(const RealVector& a, Eigen::Index d, std::size_t i) {
  if (a.size() != d)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " has wrong dimension");
  if (a.minCoeff() < 0.0)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " has a negative entry");
  if (a.maxCoeff() <= 0.0)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " is zero");
}

void validate_sample(const HermitianMatrix& A, Eigen::Index d, std::size_t i) {
  if (A.rows() != d || A.cols() != d)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " has wrong dimension");
  const double scale = 1.0 + A.cwiseAbs().maxCoeff();
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " is not Hermitian");
  const auto ep = eigh(A);
  if (ep.eigenvalues(0) < -1e-10 * scale)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " is not PSD");
  if (ep.eigenvalues(d - 1) <= 0.0)
    throw std::invalid_argument("dataset: sample " + std::to_string(i) + " is zero");
}

Eigen::Index sample_dim(const RealVector& a) { return a.size(); }
Eigen::Index sample_dim(const HermitianMatrix& A) { return A.rows(); }

}  // namespace

template <class Setup>
Dataset<Setup>::Dataset(std::vector<Sample> samples)
    : Dataset(std::move(samples), RealVector()) {}

template <class Setup>
Dataset<Setup>::Dataset(std::vector<Sample> samples, RealVector weights)
    : samples_(std::move(samples)), weights_(std::move(weights)) {
  if (samples_.empty()) throw std::invalid_argument("dataset: no samples");
  const auto n = static_cast<Eigen::Index>(samples_.size());
  if (weights_.size() == 0) weights_ = RealVector::Constant(n, 1.0 / static_cast<double>(n));
  if (weights_.size() != n) throw std::invalid_argument("dataset: weight count mismatch");
  if (weights_.minCoeff() < 0.0) throw std::invalid_argument("dataset: negative weight");
  if (std::abs(weights_.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("dataset: weights do not sum to one");
  dim_ = sample_dim(samples_.front());
  if (dim_ < 1) throw std::invalid_argument("dataset: empty sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) validate_sample(samples_[i], dim_, i);

  cumulative_.resize(samples_.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += weights_(i);
    cumulative_[static_cast<std::size_t>(i)] = acc;
  }
}

template <class Setup>
std::size_t Dataset<Setup>::draw(RngStream& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  auto i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i >= cumulative_.size()) i = cumulative_.size() - 1;
  // Skip zero-weight entries that share a cumulative value with their successor.
  while (weights_(static_cast<Eigen::Index>(i)) == 0.0 && i + 1 < cumulative_.size()) ++i;
  return i;
}

template class Dataset<Classical>;
template class Dataset<Quantum>;

QuantumDataset diagonal_embedding(const ClassicalDataset& ds) {
  std::vector<HermitianMatrix> samples;
  samples.reserve(ds.size());
  for (const auto& a : ds.samples()) samples.push_back(a.cast<Complex>().asDiagonal());
  return QuantumDataset(std::move(samples), ds.weights());
}

}  // namespace logbarrier
