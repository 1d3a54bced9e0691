#include "logbarrier/datagen.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace logbarrier {

namespace {

struct Ellipse {
  double x0, y0, a, b, phi_deg, intensity;
};

// Geometry of the 1974 phantom with the high-contrast intensity table.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
    {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
    {0.22, 0.0, 0.11, 0.31, -18.0, -0.2},
    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.2},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
    {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
}};

Complex complex_normal(RngStream& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace

RealVector shepp_logan(int side) {
  if (side < 4) throw std::invalid_argument("shepp_logan: side must be >= 4");
  RealVector img = RealVector::Zero(static_cast<Eigen::Index>(side) * side);
  for (int r = 0; r < side; ++r) {
    const double y = 1.0 - (2.0 * r + 1.0) / side;
    for (int c = 0; c < side; ++c) {
      const double x = (2.0 * c + 1.0) / side - 1.0;
      double v = 0.0;
      for (const auto& e : kSheppLogan) {
        const double th = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0, dy = y - e.y0;
        const double u = dx * std::cos(th) + dy * std::sin(th);
        const double w = -dx * std::sin(th) + dy * std::cos(th);
        if (u * u / (e.a * e.a) + w * w / (e.b * e.b) <= 1.0) v += e.intensity;
      }
      img(static_cast<Eigen::Index>(r) * side + c) = 1000.0 * std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

SensingMatrix sensing_vectors(Eigen::Index n, Eigen::Index d, RngStream& rng) {
  if (n < 1 || d < 1) throw std::invalid_argument("sensing_vectors: n and d must be >= 1");
  SensingMatrix out;
  out.b = RowMatrix::Zero(n, d);
  const double value = 1.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (;;) {
      bool any = false;
      for (Eigen::Index j = 0; j < d; ++j) {
        const bool on = (rng.next_u64() >> 63) != 0;
        out.b(i, j) = on ? value : 0.0;
        any = any || on;
      }
      if (any) break;
      ++out.redraws;
    }
  }
  return out;
}

std::vector<std::int64_t> poisson_counts(const RowMatrix& b, const RealVector& lambda, RngStream& rng) {
  if (b.cols() != lambda.size()) throw std::invalid_argument("poisson_counts: dimension mismatch");
  const RealVector rates = b * lambda;
  std::vector<std::int64_t> y(static_cast<std::size_t>(rates.size()));
  for (Eigen::Index i = 0; i < rates.size(); ++i) {
    if (rates(i) < 0.0)
      throw std::invalid_argument("poisson_counts: negative rate at row " + std::to_string(i));
    y[static_cast<std::size_t>(i)] = rng.poisson(rates(i));
  }
  return y;
}

DensityMatrix w_state(int q) {
  if (q < 2) throw std::invalid_argument("w_state: q must be >= 2");
  const Eigen::Index d = Eigen::Index{1} << q;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(q));
  for (int k = 0; k < q; ++k) psi(Eigen::Index{1} << k) = amp;
  return psi * psi.adjoint();
}

HermitianMatrix haar_unitary(Eigen::Index d, RngStream& rng) {
  HermitianMatrix Z(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) Z(i, j) = complex_normal(rng);
  Eigen::HouseholderQR<HermitianMatrix> qr(Z);
  HermitianMatrix Q = qr.householderQ();
  const HermitianMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex r = R(j, j);
    const double mag = std::abs(r);
    if (mag > 0.0) Q.col(j) *= r / mag;
  }
  return Q;
}

MeasurementEnsemble random_measurements(Eigen::Index d, Eigen::Index rank, int groups, RngStream& rng) {
  if (rank < 1 || rank > d) throw std::invalid_argument("random_measurements: need 1 <= rank <= d");
  if (groups < 1) throw std::invalid_argument("random_measurements: need at least one group");
  MeasurementEnsemble ens;
  const HermitianMatrix I = HermitianMatrix::Identity(d, d);
  for (int g = 0; g < groups; ++g) {
    const HermitianMatrix U = haar_unitary(d, rng);
    const auto head = U.leftCols(rank);
    HermitianMatrix P = head * head.adjoint();
    P = (P + P.adjoint()).eval() / 2.0;
    if (rank == d) {
      ens.ops.push_back(I);
      ens.group_sizes.push_back(1);
      continue;
    }
    const auto tail = U.rightCols(d - rank);
    HermitianMatrix Q = tail * tail.adjoint();
    Q = (Q + Q.adjoint()).eval() / 2.0;
    ens.ops.push_back(std::move(P));
    ens.ops.push_back(std::move(Q));
    ens.group_sizes.push_back(2);
  }
  return ens;
}

QSTInstance sample_outcomes(const DensityMatrix& rho_true, const MeasurementEnsemble& ens, long shots,
                            RngStream& rng) {
  if (shots < 1) throw std::invalid_argument("sample_outcomes: shots must be >= 1");
  if (ens.ops.empty() || ens.group_sizes.empty())
    throw EnsembleError("sample_outcomes: empty ensemble");

  // Per-group cumulative outcome probabilities.
  std::vector<std::size_t> offsets;
  std::vector<double> cumulative(ens.ops.size());
  std::size_t off = 0;
  for (std::size_t g = 0; g < ens.group_sizes.size(); ++g) {
    offsets.push_back(off);
    const auto size = static_cast<std::size_t>(ens.group_sizes[g]);
    if (off + size > ens.ops.size()) throw EnsembleError("sample_outcomes: group sizes exceed ops");
    double acc = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      acc += std::max(inner(ens.ops[off + k], rho_true), 0.0);
      cumulative[off + k] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-6)
      throw EnsembleError("sample_outcomes: group " + std::to_string(g) +
                          " probabilities sum to " + std::to_string(acc));
    for (std::size_t k = 0; k < size; ++k) cumulative[off + k] /= acc;
    off += size;
  }
  if (off != ens.ops.size()) throw EnsembleError("sample_outcomes: group sizes do not cover ops");

  QSTInstance out;
  out.ops = ens.ops;
  out.counts.assign(ens.ops.size(), 0);
  out.rho_true = rho_true;
  const auto n_groups = static_cast<std::uint64_t>(ens.group_sizes.size());
  for (long s = 0; s < shots; ++s) {
    const auto g = static_cast<std::size_t>(rng.uniform_index(n_groups));
    const std::size_t base = offsets[g];
    const auto size = static_cast<std::size_t>(ens.group_sizes[g]);
    const double u = rng.uniform();
    std::size_t k = 0;
    while (k + 1 < size && u >= cumulative[base + k]) ++k;
    ++out.counts[base + k];
  }
  return out;
}

HermitianMatrix random_psd(Eigen::Index d, Eigen::Index rank, RngStream& rng) {
  HermitianMatrix G(d, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    for (Eigen::Index i = 0; i < d; ++i) G(i, j) = complex_normal(rng);
  HermitianMatrix A = G * G.adjoint();
  return (A + A.adjoint()).eval() / 2.0;
}

DensityMatrix random_density(Eigen::Index d, RngStream& rng) {
  HermitianMatrix A = random_psd(d, d, rng);
  return A / std::real(A.trace());
}

KellyInstance random_market(Eigen::Index n, Eigen::Index d, RngStream& rng) {
  KellyInstance k;
  k.price_relatives.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) {
    RealVector a(d);
    for (Eigen::Index j = 0; j < d; ++j) a(j) = std::exp(0.001 * static_cast<double>(j) + 0.05 * rng.normal());
    k.price_relatives.push_back(std::move(a));
  }
  return k;
}

}  // namespace logbarrier
