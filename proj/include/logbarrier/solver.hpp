#pragma once

// Stochastic dual averaging with the logarithmic barrier (LB-SDA).
//
// State machine per step t:
//   report   rho_bar_t = (rho_1 + ... + rho_t)/t
//   query    g_t = O_B(rho_t)
//   update   S_t = S_{t-1} + ||g_t + alpha(g_t) I||^2_{rho_t,*}
//            eta_t = D / sqrt(S_t + 4 M^2 G^2 D^2 + G^2)
//            rho_{t+1} = argmin_{rho in D_d} eta_t tr(g_{1:t} rho) - log det rho

#include <functional>
#include <optional>

#include "logbarrier/logloss.hpp"
#include "logbarrier/record.hpp"

namespace logbarrier {

struct SolverConfig {
  Eigen::Index d = 1;
  int batch_size = 1;
  double G = 1.0;
  double D = 0.0;  // 0 selects sqrt(d)
  double M = 1.0;
  double newton_tol = 1e-12;
  int max_newton_iters = 100;
  std::uint64_t seed = 0;

  double regularizer_scale() const { return D > 0.0 ? D : std::sqrt(static_cast<double>(d)); }
  void validate() const;
};

struct StepReport {
  double eta = 0.0;
  int newton_iters = 0;
  double kkt_residual = 0.0;
  double shifted_dual_norm = 0.0;
};

/// eta = D / sqrt(S + 4 M^2 G^2 D^2 + G^2).
double learning_rate(double S, const SolverConfig& cfg);

/// Root of sum_i 1/(s_i + mu) = 1 for s_i >= 0, which lies in [1, d].
struct NormalizerRoot {
  double mu = 0.0;
  int iterations = 0;
  double residual = 0.0;
};
NormalizerRoot solve_normalizer(const RealVector& shifted, double tol, int max_newton_iters);

template <class Point>
struct BarrierSolution {
  Point point;
  double nu = 0.0;  // rho = (eta G + nu I)^{-1}
  StepReport report;
};

/// argmin_{rho in D_d} eta tr(G rho) - log det rho, via one eigendecomposition
/// of G and a safeguarded 1-D Newton solve for the trace multiplier.
BarrierSolution<HermitianMatrix> barrier_argmin_quantum(const HermitianMatrix& g_cum, double eta,
                                                        const SolverConfig& cfg);
/// Diagonal fast path: x_i = 1/(eta v_i + nu), sum x = 1.
BarrierSolution<RealVector> barrier_argmin_classical(const RealVector& v_cum, double eta,
                                                     const SolverConfig& cfg);

inline BarrierSolution<HermitianMatrix> barrier_argmin(const HermitianMatrix& g, double eta,
                                                       const SolverConfig& cfg) {
  return barrier_argmin_quantum(g, eta, cfg);
}
inline BarrierSolution<RealVector> barrier_argmin(const RealVector& v, double eta,
                                                  const SolverConfig& cfg) {
  return barrier_argmin_classical(v, eta, cfg);
}

template <class Setup>
struct SolverState {
  using Point = typename Setup::Point;
  long t = 1;     // index of the current iterate rho_t
  Point g_cum;    // g_1 + ... + g_{t-1}
  Point rho;      // rho_t
  Point rho_sum;  // rho_1 + ... + rho_t
  double S = 0.0;
};

/// The maximally mixed point I/d (or the uniform vector).
template <class Point>
Point maximally_mixed(Eigen::Index d) {
  if constexpr (Point::IsVectorAtCompileTime)
    return Point::Constant(d, 1.0 / static_cast<double>(d));
  else
    return Point::Identity(d, d) / static_cast<double>(d);
}

template <class Setup>
SolverState<Setup> initial_state(Eigen::Index d) {
  using Point = typename Setup::Point;
  SolverState<Setup> s;
  s.rho = maximally_mixed<Point>(d);
  s.rho_sum = s.rho;
  if constexpr (Point::IsVectorAtCompileTime)
    s.g_cum = Point::Zero(d);
  else
    s.g_cum = Point::Zero(d, d);
  return s;
}

template <class Setup>
typename Setup::Point averaged_iterate(const SolverState<Setup>& s) {
  return s.rho_sum / static_cast<double>(s.t);
}

/// Advances the state with an explicit gradient estimate g_t taken at rho_t.
template <class Setup>
StepReport lbsda_advance(SolverState<Setup>& s, const typename Setup::Point& g,
                         const SolverConfig& cfg) {
  const double v = dual_local_norm(s.rho, shifted(s.rho, g));
  s.S += v * v;
  const double eta = learning_rate(s.S, cfg);
  s.g_cum += g;
  auto sol = barrier_argmin(s.g_cum, eta, cfg);
  s.rho = std::move(sol.point);
  s.rho_sum += s.rho;
  ++s.t;
  sol.report.shifted_dual_norm = v;
  return sol.report;
}

/// One LB-SDA step with the B-sample oracle. The caller reports
/// averaged_iterate(s) before calling this.
template <class Setup>
StepReport lbsda_step(SolverState<Setup>& s, const Dataset<Setup>& ds, const SolverConfig& cfg,
                      RngStream& rng) {
  const auto est = minibatch_gradient(ds, s.rho, cfg.batch_size, rng);
  return lbsda_advance(s, est.g, cfg);
}

template <class Setup>
using MetricFn = std::function<double(const typename Setup::Point&)>;

template <class Setup>
struct RunResult {
  RunRecord record;
  typename Setup::Point final_iterate;
};

/// Iterates LB-SDA until the budget is spent, recording f(rho_bar_t) at the
/// scheduled iterations and at the last one. `epoch_size` is the n used for
/// epoch accounting (defaults to the dataset size).
template <class Setup>
RunResult<Setup> lbsda_run(const Dataset<Setup>& ds, const SolverConfig& cfg, const Budget& budget,
                           const CheckpointSchedule& schedule = {},
                           const MetricFn<Setup>& metric = {}, std::size_t epoch_size = 0,
                           std::string metric_name = "none") {
  cfg.validate();
  if (ds.dim() != cfg.d) throw std::invalid_argument("lbsda_run: dataset dimension mismatch");
  const double n = static_cast<double>(epoch_size ? epoch_size : ds.size());
  const double iters_per_epoch = n / cfg.batch_size;
  const long max_iter = budget.max_iterations(iters_per_epoch);
  if (max_iter < 1) throw std::invalid_argument("lbsda_run: budget must be positive");

  RngStream rng(cfg.seed);
  auto state = initial_state<Setup>(cfg.d);
  RunResult<Setup> out;
  out.record.metric_name = std::move(metric_name);
  Stopwatch clock;
  long next_cp = 1;
  clock.start();
  for (long t = 1;; ++t) {
    const bool last = t >= max_iter ||
                      (budget.kind == Budget::Kind::seconds && clock.seconds() >= budget.value);
    if (t == next_cp || last) {
      clock.pause();
      auto avg = averaged_iterate(state);
      Checkpoint cp;
      cp.iter = t;
      cp.epochs = static_cast<double>(t) / iters_per_epoch;
      cp.elapsed_s = clock.seconds();
      cp.objective = f_value(ds, avg);
      if (metric) cp.metric = metric(avg);
      out.record.checkpoints.push_back(cp);
      if (t == next_cp) next_cp = schedule.next(t);
      if (last) {
        out.final_iterate = std::move(avg);
        break;
      }
      clock.start();
    }
    lbsda_step(state, ds, cfg, rng);
  }
  return out;
}

/// Theorem-style bound (4 d C^3 + 2 C sqrt(sigma2 d t + 4 d^2 G^2 + d G^2) + 1)/t
/// with C = ln t + 3.
double error_bound(long t, const SolverConfig& cfg, double sigma2);

}  // namespace logbarrier
