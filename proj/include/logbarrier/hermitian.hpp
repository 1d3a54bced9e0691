#pragma once

// Hermitian linear algebra and the geometry of the logarithmic barrier
// h(rho) = -log det rho.
//
// Every routine accepts either a Hermitian matrix (quantum setup) or a real
// vector standing for a diagonal matrix (classical setup). The two paths are
// selected at compile time on Derived::IsVectorAtCompileTime, so the vector
// path is exactly the diagonal restriction of the matrix path.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "logbarrier/types.hpp"

namespace logbarrier {

template <typename Real>
struct EigenPair {
  RealVectorT<Real> eigenvalues;       // ascending
  HermitianMatrixT<Real> eigenvectors;  // orthonormal columns
};

/// Checks Hermitian symmetry within tol*(1+max|H|) and returns (H + H*)/2.
template <typename Derived>
HermitianMatrixT<typename Derived::RealScalar> hermitian(const Eigen::MatrixBase<Derived>& H,
                                                         double tol = kHermitianTol) {
  using Real = typename Derived::RealScalar;
  if (H.rows() != H.cols()) throw std::invalid_argument("hermitian: matrix is not square");
  HermitianMatrixT<Real> M = H.template cast<std::complex<Real>>();
  const Real scale = 1 + M.cwiseAbs().maxCoeff();
  const Real asym = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "hermitian: asymmetry " << asym << " exceeds tolerance";
    throw std::invalid_argument(os.str());
  }
  return (M + M.adjoint()) / Real(2);
}

template <typename Derived>
EigenPair<typename Derived::RealScalar> eigh(const Eigen::MatrixBase<Derived>& H) {
  using Real = typename Derived::RealScalar;
  using Mat = HermitianMatrixT<Real>;
  Eigen::SelfAdjointEigenSolver<Mat> es(H.template cast<std::complex<Real>>());
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigh: eigensolver did not converge (dim " << H.rows() << ", max |entry| "
       << H.cwiseAbs().maxCoeff() << ", Frobenius " << H.norm() << ")";
    throw SolverError(os.str());
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace detail {

template <typename Real>
void require_interior(Real min_eig, const char* where) {
  if (!(min_eig > Real(kBoundaryFloor))) {
    std::ostringstream os;
    os << where << ": iterate on the boundary (min eigenvalue " << min_eig << ")";
    throw BoundaryError(os.str());
  }
}

template <typename DA, typename DB>
auto trace_product(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  // tr(AB) without forming the product.
  return (A.array() * B.transpose().array()).sum();
}

}  // namespace detail

/// ||X||_rho = sqrt(tr((rho^{-1} X)^2)), the Hessian norm of -log det at rho.
template <typename DR, typename DX>
typename DR::RealScalar local_norm(const Eigen::MatrixBase<DR>& rho, const Eigen::MatrixBase<DX>& X) {
  using Real = typename DR::RealScalar;
  if constexpr (DR::IsVectorAtCompileTime) {
    detail::require_interior<Real>(rho.minCoeff(), "local_norm");
    return X.cwiseQuotient(rho).norm();
  } else {
    const auto ep = eigh(rho);
    detail::require_interior<Real>(ep.eigenvalues(0), "local_norm");
    const HermitianMatrixT<Real> Y = ep.eigenvectors.adjoint() * X * ep.eigenvectors;
    const RealVectorT<Real> inv_sqrt = ep.eigenvalues.cwiseSqrt().cwiseInverse();
    Real acc = 0;
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      for (Eigen::Index i = 0; i < Y.rows(); ++i)
        acc += std::norm(Y(i, j) * inv_sqrt(i) * inv_sqrt(j));
    return std::sqrt(acc);
  }
}

/// ||X||_{rho,*} = sqrt(tr((rho X)^2)).
template <typename DR, typename DX>
typename DR::RealScalar dual_local_norm(const Eigen::MatrixBase<DR>& rho,
                                        const Eigen::MatrixBase<DX>& X) {
  using Real = typename DR::RealScalar;
  if constexpr (DR::IsVectorAtCompileTime) {
    return rho.cwiseProduct(X).norm();
  } else {
    const HermitianMatrixT<Real> P = rho * X;
    const Real sq = std::real(detail::trace_product(P, P));
    return std::sqrt(std::max(sq, Real(0)));
  }
}

/// alpha_rho(X) = -tr(rho X rho)/tr(rho^2); minimizes ||X + alpha I||_{rho,*} over alpha.
template <typename DR, typename DX>
typename DR::RealScalar alpha_shift(const Eigen::MatrixBase<DR>& rho, const Eigen::MatrixBase<DX>& X) {
  using Real = typename DR::RealScalar;
  if constexpr (DR::IsVectorAtCompileTime) {
    const RealVectorT<Real> sq = rho.cwiseAbs2();
    return -sq.dot(X) / sq.sum();
  } else {
    const HermitianMatrixT<Real> rho2 = rho * rho;
    return -std::real(detail::trace_product(rho2, X)) / std::real(rho2.trace());
  }
}

/// X + alpha_rho(X) I.
template <typename DR, typename DX>
typename DX::PlainObject shifted(const Eigen::MatrixBase<DR>& rho, const Eigen::MatrixBase<DX>& X) {
  typename DX::PlainObject out = X;
  const auto a = alpha_shift(rho, X);
  if constexpr (DX::IsVectorAtCompileTime)
    out.array() += a;
  else
    out.diagonal().array() += a;
  return out;
}

/// log det rho, i.e. -h(rho).
template <typename Derived>
typename Derived::RealScalar logdet(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  if constexpr (Derived::IsVectorAtCompileTime) {
    detail::require_interior<Real>(rho.minCoeff(), "logdet");
    return rho.array().log().sum();
  } else {
    const auto ep = eigh(rho);
    detail::require_interior<Real>(ep.eigenvalues(0), "logdet");
    return ep.eigenvalues.array().log().sum();
  }
}

/// Principal square root of a PSD matrix; eigenvalues below zero are clipped.
template <typename Derived>
HermitianMatrixT<typename Derived::RealScalar> psd_sqrt(const Eigen::MatrixBase<Derived>& A) {
  using Real = typename Derived::RealScalar;
  const auto ep = eigh(A);
  const RealVectorT<Real> s = ep.eigenvalues.cwiseMax(Real(0)).cwiseSqrt();
  return ep.eigenvectors * s.asDiagonal() * ep.eigenvectors.adjoint();
}

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1].
/// Eigenvalues at rounding level (below d * eps * max) are treated as zero so
/// that rank-deficient inputs do not pick up sqrt(noise) contributions.
template <typename DA, typename DB>
typename DA::RealScalar fidelity(const Eigen::MatrixBase<DA>& rho, const Eigen::MatrixBase<DB>& sigma) {
  using Real = typename DA::RealScalar;
  if constexpr (DA::IsVectorAtCompileTime) {
    const Real s = rho.cwiseMax(Real(0)).cwiseProduct(sigma.cwiseMax(Real(0))).cwiseSqrt().sum();
    return std::clamp(s * s, Real(0), Real(1));
  } else {
    const auto floor_of = [](const RealVectorT<Real>& ev) {
      const Real top = ev.cwiseAbs().maxCoeff();
      return Real(ev.size()) * std::numeric_limits<Real>::epsilon() * top;
    };
    const auto ep = eigh(rho);
    const Real cut = floor_of(ep.eigenvalues);
    const RealVectorT<Real> root =
        ep.eigenvalues.unaryExpr([cut](Real v) { return v > cut ? std::sqrt(v) : Real(0); });
    // sqrt(rho) sigma sqrt(rho) in the eigenbasis of rho.
    HermitianMatrixT<Real> inner = ep.eigenvectors.adjoint() * sigma * ep.eigenvectors;
    inner = root.asDiagonal() * inner * root.asDiagonal();
    inner = (inner + inner.adjoint()).eval() / Real(2);
    const RealVectorT<Real> ev = eigh(inner).eigenvalues;
    const Real cut2 = floor_of(ev);
    Real s = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > cut2) s += std::sqrt(ev(i));
    return std::clamp(s * s, Real(0), Real(1));
  }
}

/// Checks the DensityMatrix invariants (Hermitian, PSD within tol, unit trace within tol).
template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& rho, double tol = 1e-10) {
  if constexpr (Derived::IsVectorAtCompileTime) {
    return rho.minCoeff() >= -tol && std::abs(rho.sum() - 1) <= tol;
  } else {
    if (rho.rows() != rho.cols()) return false;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace() - typename Derived::Scalar(1)) > tol) return false;
    return eigh(rho).eigenvalues(0) >= -tol;
  }
}

}  // namespace logbarrier
