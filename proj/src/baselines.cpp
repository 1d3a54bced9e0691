#include "logbarrier/baselines.hpp"

namespace logbarrier {

SimplexVector em_step(const ClassicalDataset& ds, const SimplexVector& x) {
  if (x.size() != ds.dim()) throw std::invalid_argument("em_step: dimension mismatch");
  RealVector r = RealVector::Zero(x.size());
  for (std::size_t j = 0; j < ds.size(); ++j) {
    const double w = ds.weights()(static_cast<Eigen::Index>(j));
    if (w == 0.0) continue;
    const double v = inner(ds.sample(j), x);
    if (!(v > kFeasibilityFloor)) throw InfeasibleSampleError(j, v);
    r += (w / v) * ds.sample(j);
  }
  SimplexVector next = x.cwiseProduct(r);
  const double total = next.sum();
  if (!(total > kFeasibilityFloor)) throw BoundaryError("em_step: iterate collapsed to zero");
  return next / total;
}

DensityMatrix imle_step(const QuantumDataset& ds, const DensityMatrix& rho) {
  if (rho.rows() != ds.dim()) throw std::invalid_argument("imle_step: dimension mismatch");
  HermitianMatrix R = HermitianMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t j = 0; j < ds.size(); ++j) {
    const double w = ds.weights()(static_cast<Eigen::Index>(j));
    if (w == 0.0) continue;
    const double v = inner(ds.sample(j), rho);
    if (!(v > kFeasibilityFloor)) throw InfeasibleSampleError(j, v);
    R += (w / v) * ds.sample(j);
  }
  HermitianMatrix next = R * rho * R;
  next = (next + next.adjoint()).eval() / 2.0;
  const double tr = std::real(next.trace());
  if (!(tr > kFeasibilityFloor)) throw BoundaryError("imle_step: iterate collapsed to zero");
  return next / tr;
}

}  // namespace logbarrier
