#pragma once

// Applications reducing to the logarithmic loss: the Poisson inverse
// problem, ML quantum state tomography, the density-matrix relaxation of
// PSD permanents, and Kelly portfolios.

#include <cstdint>
#include <optional>
#include <vector>

#include "logbarrier/logloss.hpp"
#include "logbarrier/solver.hpp"

namespace logbarrier {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Poisson inverse problem

struct PoissonInstance {
  RowMatrix b;                    // n x d sensing vectors, one per row
  std::vector<std::int64_t> y;    // counts
  std::optional<RealVector> lambda_true;

  Eigen::Index dim() const { return b.cols(); }
  std::size_t size() const { return y.size(); }
  void validate() const;
};

/// What is needed to map a simplex point back to a signal.
struct ReformulationContext {
  double Y = 0.0;               // total count
  RealVector column_sums;       // sum_k b_k(j) over all n rows
  std::size_t n_original = 0;   // rows before dropping y_i = 0
  std::vector<std::size_t> kept_rows;
};

struct PipReformulation {
  ClassicalDataset dataset;
  ReformulationContext context;
};

/// a_i(j) = Y b_i(j) / sum_k b_k(j), weights y_i / Y; rows with y_i = 0 are dropped.
PipReformulation pip_to_classical(const PoissonInstance& p);

/// lambda(j) = Y x(j) / sum_k b_k(j).
RealVector recover_lambda(const SimplexVector& x, const ReformulationContext& ctx);

/// sum_i <b_i, lambda> - y_i log <b_i, lambda> (the Poisson negative log-likelihood up to constants).
double poisson_objective(const PoissonInstance& p, const RealVector& lambda);

/// ||lambda_hat - lambda_true||_2 / ||lambda_true||_2.
double normalized_estimation_error(const RealVector& lambda_hat, const RealVector& lambda_true);

// ---------------------------------------------------------------------------
// Quantum state tomography

struct QSTInstance {
  std::vector<HermitianMatrix> ops;   // distinct measurement operators
  std::vector<std::int64_t> counts;   // multiplicity of each recorded outcome
  std::optional<DensityMatrix> rho_true;

  Eigen::Index dim() const { return ops.empty() ? 0 : ops.front().rows(); }
  std::int64_t total_shots() const;
  /// Uniform weights over recorded outcomes, folded by multiplicity.
  QuantumDataset dataset() const;
};

struct QstEstimate {
  DensityMatrix rho;
  RunRecord record;
};

/// Runs LB-SDA on the tomography likelihood; reports fidelity to rho_true at
/// checkpoints when it is known.
QstEstimate qst_estimate(const QSTInstance& q, const SolverConfig& cfg, const Budget& budget,
                         const CheckpointSchedule& schedule = {});

// ---------------------------------------------------------------------------
// Permanents

inline constexpr Eigen::Index kMaxPermanentDim = 12;

/// Ryser's formula with Gray-code subset order; d <= 12.
Complex permanent_exact(const HermitianMatrix& A);
/// Sum over all d! permutations; d <= 8. Validator for permanent_exact.
Complex permanent_bruteforce(const HermitianMatrix& A);

struct PermanentRelaxation {
  double rel = 0.0;
  DensityMatrix rho;
  RunRecord record;
};

/// Samples d v_i v_i^* (v_i eigenvectors of A) with uniform weights.
QuantumDataset permanent_dataset(const HermitianMatrix& A);

/// rel A = max_rho prod_i tr(d v_i v_i^* rho), approximated by LB-SDA; the
/// returned value is exp(-d f(rho_bar)).
PermanentRelaxation permanent_relaxation(const HermitianMatrix& A, const SolverConfig& cfg,
                                         const Budget& budget, const CheckpointSchedule& schedule = {});

/// prod_i tr(A_i rho) for the relaxation samples of A.
double relaxation_product(const HermitianMatrix& A, const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Kelly portfolios

struct KellyInstance {
  std::vector<RealVector> price_relatives;
  RealVector weights;  // empty for the uniform empirical distribution
};

ClassicalDataset kelly_dataset(const KellyInstance& k);

}  // namespace logbarrier
