#include "logbarrier/solver.hpp"

#include <algorithm>
#include <sstream>

namespace logbarrier {

void SolverConfig::validate() const {
  if (d < 1) throw std::invalid_argument("solver config: d must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("solver config: B must be >= 1");
  if (!(G > 0.0)) throw std::invalid_argument("solver config: G must be positive");
  if (D < 0.0) throw std::invalid_argument("solver config: D must be positive");
  if (!(M > 0.0)) throw std::invalid_argument("solver config: M must be positive");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("solver config: newton_tol must be positive");
  if (max_newton_iters < 1) throw std::invalid_argument("solver config: max_newton_iters must be >= 1");
}

double learning_rate(double S, const SolverConfig& cfg) {
  if (S < 0.0) throw std::invalid_argument("learning_rate: S must be nonnegative");
  const double D = cfg.regularizer_scale();
  const double GD = cfg.G * D;
  return D / std::sqrt(S + 4.0 * cfg.M * cfg.M * GD * GD + cfg.G * cfg.G);
}

namespace {

struct PhiEval {
  double phi;
  double dphi;
};

PhiEval eval_phi(const RealVector& s, double mu) {
  double phi = -1.0, dphi = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double r = 1.0 / (s(i) + mu);
    phi += r;
    dphi -= r * r;
  }
  return {phi, dphi};
}

}  // namespace

NormalizerRoot solve_normalizer(const RealVector& s, double tol, int max_newton_iters) {
  const auto d = static_cast<double>(s.size());
  // phi(1) >= 0 since the smallest shift is 0; phi(d) <= 0 since all shifts are >= 0.
  double lo = 1.0, hi = d;
  double mu = std::clamp(d - s.mean(), lo, hi);

  NormalizerRoot out;
  PhiEval e = eval_phi(s, mu);
  int polish = 0;
  for (int k = 0; k < max_newton_iters; ++k) {
    ++out.iterations;
    if (e.phi == 0.0) break;
    if (e.phi > 0.0)
      lo = mu;
    else
      hi = mu;
    double next = mu - e.phi / e.dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const PhiEval en = eval_phi(s, next);
    if (std::abs(e.phi) <= tol) {
      // Already converged; take at most a few more steps while they help.
      if (std::abs(en.phi) >= std::abs(e.phi) || ++polish > 3) break;
    }
    mu = next;
    e = en;
  }
  if (std::abs(e.phi) > tol) {
    // Bisection fallback on the maintained bracket.
    for (int k = 0; k < 200 && std::abs(e.phi) > tol; ++k) {
      ++out.iterations;
      if (e.phi > 0.0)
        lo = mu;
      else
        hi = mu;
      mu = 0.5 * (lo + hi);
      e = eval_phi(s, mu);
    }
  }
  out.mu = mu;
  out.residual = std::abs(e.phi);
  if (!(out.residual <= tol)) {
    std::ostringstream os;
    os << "barrier subproblem: trace multiplier did not converge (residual " << out.residual
       << ", shifted spectrum range [" << s.minCoeff() << ", " << s.maxCoeff() << "])";
    throw SolverError(os.str());
  }
  return out;
}

BarrierSolution<HermitianMatrix> barrier_argmin_quantum(const HermitianMatrix& g_cum, double eta,
                                                        const SolverConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("barrier_argmin: eta must be positive");
  const auto ep = eigh(g_cum);
  const double lmin = ep.eigenvalues(0);
  const RealVector s = (eta * (ep.eigenvalues.array() - lmin)).matrix();
  NormalizerRoot root;
  try {
    root = solve_normalizer(s, cfg.newton_tol, cfg.max_newton_iters);
  } catch (const SolverError& e) {
    std::ostringstream os;
    os << e.what() << " at eta " << eta << ", spectrum [" << lmin << ", "
       << ep.eigenvalues(ep.eigenvalues.size() - 1) << "]";
    throw SolverError(os.str());
  }
  const RealVector w = (s.array() + root.mu).inverse().matrix();
  HermitianMatrix rho = ep.eigenvectors * w.cast<Complex>().asDiagonal() * ep.eigenvectors.adjoint();
  rho = (rho + rho.adjoint()).eval() / 2.0;

  BarrierSolution<HermitianMatrix> out;
  out.point = std::move(rho);
  out.nu = root.mu - eta * lmin;
  out.report.eta = eta;
  out.report.newton_iters = root.iterations;
  out.report.kkt_residual = root.residual;
  return out;
}

BarrierSolution<RealVector> barrier_argmin_classical(const RealVector& v_cum, double eta,
                                                     const SolverConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("barrier_argmin: eta must be positive");
  const double vmin = v_cum.minCoeff();
  const RealVector s = (eta * (v_cum.array() - vmin)).matrix();
  NormalizerRoot root;
  try {
    root = solve_normalizer(s, cfg.newton_tol, cfg.max_newton_iters);
  } catch (const SolverError& e) {
    std::ostringstream os;
    os << e.what() << " at eta " << eta;
    throw SolverError(os.str());
  }
  BarrierSolution<RealVector> out;
  out.point = (s.array() + root.mu).inverse().matrix();
  out.nu = root.mu - eta * vmin;
  out.report.eta = eta;
  out.report.newton_iters = root.iterations;
  out.report.kkt_residual = root.residual;
  return out;
}

double error_bound(long t, const SolverConfig& cfg, double sigma2) {
  if (t < 1) throw std::invalid_argument("error_bound: t must be >= 1");
  const double d = static_cast<double>(cfg.d);
  const double tt = static_cast<double>(t);
  const double G2 = cfg.G * cfg.G;
  const double C = std::log(tt) + 3.0;
  const double num =
      4.0 * d * C * C * C + 2.0 * C * std::sqrt(sigma2 * d * tt + 4.0 * d * d * G2 + d * G2) + 1.0;
  return num / tt;
}

}  // namespace logbarrier
