#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace logbarrier {

template <typename Real>
using HermitianMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using HermitianMatrix = HermitianMatrixT<double>;
// A density matrix is a HermitianMatrix that is PSD with unit trace.
using DensityMatrix = HermitianMatrix;
// A simplex vector is a nonnegative RealVector summing to one.
using SimplexVector = Eigen::VectorXd;
using RealVector = Eigen::VectorXd;

/// Thrown when an iterate sits on (or numerically past) the boundary of the
/// positive definite cone.
class BoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A loss sample has tr(A rho) (or <a, x>) below the feasibility floor.
class InfeasibleSampleError : public std::domain_error {
 public:
  InfeasibleSampleError(std::size_t index, double value)
      : std::domain_error("sample " + std::to_string(index) +
                          " is infeasible: inner product " + std::to_string(value)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kFeasibilityFloor = 1e-300;
inline constexpr double kBoundaryFloor = 1e-14;
inline constexpr double kHermitianTol = 1e-12;

}  // namespace logbarrier
