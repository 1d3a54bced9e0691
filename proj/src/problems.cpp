#include "logbarrier/problems.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace logbarrier {

// ---------------------------------------------------------------------------
// Poisson inverse problem

void PoissonInstance::validate() const {
  if (b.rows() != static_cast<Eigen::Index>(y.size()))
    throw std::invalid_argument("poisson instance: b has " + std::to_string(b.rows()) +
                                " rows but there are " + std::to_string(y.size()) + " counts");
  if (b.size() == 0) throw std::invalid_argument("poisson instance: empty");
  if (b.minCoeff() < 0.0) throw std::invalid_argument("poisson instance: negative sensing entry");
  std::int64_t total = 0;
  for (auto c : y) {
    if (c < 0) throw std::invalid_argument("poisson instance: negative count");
    total += c;
  }
  if (total <= 0) throw std::invalid_argument("poisson instance: all counts are zero");
  const RealVector cs = b.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < cs.size(); ++j)
    if (!(cs(j) > 0.0))
      throw std::invalid_argument("poisson instance: coordinate " + std::to_string(j) +
                                  " is never sensed (zero column sum)");
  if (lambda_true && lambda_true->size() != b.cols())
    throw std::invalid_argument("poisson instance: lambda_true has wrong dimension");
}

PipReformulation pip_to_classical(const PoissonInstance& p) {
  p.validate();
  ReformulationContext ctx;
  ctx.n_original = p.size();
  ctx.column_sums = p.b.colwise().sum().transpose();
  ctx.Y = static_cast<double>(std::accumulate(p.y.begin(), p.y.end(), std::int64_t{0}));

  const RealVector scale = ctx.column_sums.cwiseInverse() * ctx.Y;
  std::vector<RealVector> samples;
  std::vector<double> w;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.y[i] == 0) continue;
    ctx.kept_rows.push_back(i);
    samples.emplace_back(p.b.row(static_cast<Eigen::Index>(i)).transpose().cwiseProduct(scale));
    w.push_back(static_cast<double>(p.y[i]) / ctx.Y);
  }
  RealVector weights = Eigen::Map<RealVector>(w.data(), static_cast<Eigen::Index>(w.size()));
  return {ClassicalDataset(std::move(samples), std::move(weights)), std::move(ctx)};
}

RealVector recover_lambda(const SimplexVector& x, const ReformulationContext& ctx) {
  if (x.size() != ctx.column_sums.size())
    throw std::invalid_argument("recover_lambda: dimension mismatch");
  return (ctx.Y * x.array() / ctx.column_sums.array()).cwiseMax(0.0).matrix();
}

double poisson_objective(const PoissonInstance& p, const RealVector& lambda) {
  const RealVector rates = p.b * lambda;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rates.size(); ++i) {
    const auto yi = static_cast<double>(p.y[static_cast<std::size_t>(i)]);
    acc += rates(i);
    if (yi > 0.0) acc -= yi * std::log(rates(i));
  }
  return acc;
}

double normalized_estimation_error(const RealVector& lambda_hat, const RealVector& lambda_true) {
  if (lambda_hat.size() != lambda_true.size())
    throw std::invalid_argument("normalized_estimation_error: dimension mismatch");
  const double denom = lambda_true.norm();
  if (!(denom > 0.0)) throw std::invalid_argument("normalized_estimation_error: zero ground truth");
  return (lambda_hat - lambda_true).norm() / denom;
}

// ---------------------------------------------------------------------------
// Quantum state tomography

std::int64_t QSTInstance::total_shots() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

QuantumDataset QSTInstance::dataset() const {
  if (ops.size() != counts.size()) throw std::invalid_argument("qst instance: ops/counts mismatch");
  const auto total = static_cast<double>(total_shots());
  if (!(total > 0)) throw std::invalid_argument("qst instance: no recorded outcomes");
  std::vector<HermitianMatrix> samples;
  std::vector<double> w;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (counts[i] < 0) throw std::invalid_argument("qst instance: negative count");
    if (counts[i] == 0) continue;
    samples.push_back(ops[i]);
    w.push_back(static_cast<double>(counts[i]) / total);
  }
  RealVector weights = Eigen::Map<RealVector>(w.data(), static_cast<Eigen::Index>(w.size()));
  return QuantumDataset(std::move(samples), std::move(weights));
}

QstEstimate qst_estimate(const QSTInstance& q, const SolverConfig& cfg, const Budget& budget,
                         const CheckpointSchedule& schedule) {
  const auto ds = q.dataset();
  MetricFn<Quantum> metric;
  std::string name = "none";
  if (q.rho_true) {
    metric = [&q](const HermitianMatrix& rho) { return fidelity(rho, *q.rho_true); };
    name = "fidelity";
  }
  auto res = lbsda_run(ds, cfg, budget, schedule, metric,
                       static_cast<std::size_t>(q.total_shots()), name);
  return {std::move(res.final_iterate), std::move(res.record)};
}

// ---------------------------------------------------------------------------
// Permanents

Complex permanent_exact(const HermitianMatrix& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("permanent: matrix is not square");
  if (n > kMaxPermanentDim)
    throw std::invalid_argument("permanent: dimension " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxPermanentDim));
  if (n == 0) return Complex(1.0);
  // per A = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} A_ij, subsets visited in Gray-code order.
  Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
  Complex total(0.0);
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int j = __builtin_ctzll(k);
    const std::uint64_t bit = std::uint64_t{1} << j;
    gray ^= bit;
    if (gray & bit)
      row_sums += A.col(j);
    else
      row_sums -= A.col(j);
    const Complex prod = row_sums.prod();
    const bool odd = (__builtin_popcountll(gray) & 1) != 0;
    total += odd ? -prod : prod;
  }
  return (n % 2 == 0) ? total : -total;
}

Complex permanent_bruteforce(const HermitianMatrix& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("permanent: matrix is not square");
  if (n > 8) throw std::invalid_argument("permanent_bruteforce: dimension too large");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Complex total(0.0);
  do {
    Complex prod(1.0);
    for (Eigen::Index i = 0; i < n; ++i) prod *= A(i, perm[static_cast<std::size_t>(i)]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

namespace {

HermitianMatrix checked_psd(const HermitianMatrix& A) {
  HermitianMatrix H = hermitian(A);
  const auto ep = eigh(H);
  if (ep.eigenvalues(0) < -1e-10 * (1.0 + ep.eigenvalues.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("permanent relaxation: matrix is not PSD");
  return H;
}

}  // namespace

QuantumDataset permanent_dataset(const HermitianMatrix& A) {
  const auto ep = eigh(checked_psd(A));
  const Eigen::Index d = A.rows();
  std::vector<HermitianMatrix> samples;
  samples.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::VectorXcd v = ep.eigenvectors.col(i);
    samples.push_back(static_cast<double>(d) * (v * v.adjoint()));
  }
  return QuantumDataset(std::move(samples));
}

double relaxation_product(const HermitianMatrix& A, const DensityMatrix& rho) {
  const auto ds = permanent_dataset(A);
  double prod = 1.0;
  for (const auto& s : ds.samples()) prod *= inner(s, rho);
  return prod;
}

PermanentRelaxation permanent_relaxation(const HermitianMatrix& A, const SolverConfig& cfg,
                                         const Budget& budget, const CheckpointSchedule& schedule) {
  const auto ds = permanent_dataset(A);
  const double d = static_cast<double>(A.rows());
  MetricFn<Quantum> rel = [&ds, d](const HermitianMatrix& rho) {
    return std::exp(-d * f_value(ds, rho));
  };
  auto res = lbsda_run(ds, cfg, budget, schedule, rel, 0, "rel");
  PermanentRelaxation out;
  out.rel = std::exp(-d * f_value(ds, res.final_iterate));
  out.rho = std::move(res.final_iterate);
  out.record = std::move(res.record);
  return out;
}

// ---------------------------------------------------------------------------
// Kelly portfolios

ClassicalDataset kelly_dataset(const KellyInstance& k) {
  if (k.weights.size() == 0) return ClassicalDataset(k.price_relatives);
  return ClassicalDataset(k.price_relatives, k.weights);
}

}  // namespace logbarrier
