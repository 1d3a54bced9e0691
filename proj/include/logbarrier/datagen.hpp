#pragma once

// Synthetic instances: phantom signals, sensing vectors with Poisson counts,
// the W state, random projective measurements and outcome sampling.

#include <cstdint>
#include <vector>

#include "logbarrier/problems.hpp"
#include "logbarrier/rng.hpp"

namespace logbarrier {

/// Ten-ellipse Shepp-Logan head phantom (high-contrast intensities), sampled
/// at pixel centres on a side x side grid, clipped to [0,1] and scaled by
/// 1000. Row-major, row 0 at the top of the image.
RealVector shepp_logan(int side);

struct SensingMatrix {
  RowMatrix b;       // n x d
  long redraws = 0;  // all-zero rows that were drawn again
};

/// Each entry independently 0 or 1/n with probability 1/2.
SensingMatrix sensing_vectors(Eigen::Index n, Eigen::Index d, RngStream& rng);

/// y_i ~ Poisson(<b_i, lambda>).
std::vector<std::int64_t> poisson_counts(const RowMatrix& b, const RealVector& lambda, RngStream& rng);

/// |W><W| on q qubits, |W> = q^{-1/2} sum_k |0..010..0>.
DensityMatrix w_state(int q);

/// Haar-random d x d unitary (QR of a complex Gaussian matrix with the
/// diagonal phases of R divided out).
HermitianMatrix haar_unitary(Eigen::Index d, RngStream& rng);

struct MeasurementEnsemble {
  std::vector<HermitianMatrix> ops;
  std::vector<int> group_sizes;  // ops are stored group by group
};

class EnsembleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `groups` settings, each a complementary projector pair {P, I - P} with
/// rank P = rank, P spanned by the first `rank` columns of a Haar unitary.
/// For rank == d each group is the single element I.
MeasurementEnsemble random_measurements(Eigen::Index d, Eigen::Index rank, int groups, RngStream& rng);

/// Each shot picks a group uniformly and an outcome with probability
/// tr(A rho_true); counts are accumulated per operator.
QSTInstance sample_outcomes(const DensityMatrix& rho_true, const MeasurementEnsemble& ens, long shots,
                            RngStream& rng);

/// G G^* / tr(G G^*) for a complex Gaussian d x d matrix G.
DensityMatrix random_density(Eigen::Index d, RngStream& rng);

/// Random PSD matrix G G^* with G complex Gaussian d x rank (not normalized).
HermitianMatrix random_psd(Eigen::Index d, Eigen::Index rank, RngStream& rng);

/// Market of d assets over n days with log-normal price relatives.
KellyInstance random_market(Eigen::Index n, Eigen::Index d, RngStream& rng);

}  // namespace logbarrier
