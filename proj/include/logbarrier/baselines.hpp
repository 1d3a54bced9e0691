#pragma once

// Batch fixed-point baselines: EM (classical) and iMLE (quantum, undiluted).

#include "logbarrier/logloss.hpp"
#include "logbarrier/record.hpp"
#include "logbarrier/solver.hpp"

namespace logbarrier {

/// x+(i) = x(i) sum_j w_j a_j(i) / <a_j, x>, renormalized.
SimplexVector em_step(const ClassicalDataset& ds, const SimplexVector& x);

/// rho+ = R rho R / tr(R rho R) with R = sum_j w_j A_j / tr(A_j rho).
DensityMatrix imle_step(const QuantumDataset& ds, const DensityMatrix& rho);

inline SimplexVector baseline_step(const ClassicalDataset& ds, const SimplexVector& x) { return em_step(ds, x); }
inline DensityMatrix baseline_step(const QuantumDataset& ds, const DensityMatrix& rho) {
  return imle_step(ds, rho);
}

/// Consecutive objective increases after which a baseline run is declared divergent.
inline constexpr int kDivergenceWindow = 20;

/// Runs EM (classical) or iMLE (quantum) from the maximally mixed point. One
/// iteration is one epoch. Stops early, flagging `diverged`, when the
/// objective rises for kDivergenceWindow consecutive steps.
template <class Setup>
RunResult<Setup> baseline_run(const Dataset<Setup>& ds, const Budget& budget,
                              const CheckpointSchedule& schedule = {},
                              const MetricFn<Setup>& metric = {}, std::string metric_name = "none") {
  const long max_iter = budget.max_iterations(1.0);
  if (max_iter < 1) throw std::invalid_argument("baseline_run: budget must be positive");
  auto x = maximally_mixed<typename Setup::Point>(ds.dim());
  RunResult<Setup> out;
  out.record.metric_name = std::move(metric_name);
  Stopwatch clock;
  long next_cp = 1;
  int rises = 0;
  double f_prev = f_value(ds, x);
  clock.start();
  for (long t = 1;; ++t) {
    const bool last = t >= max_iter || rises >= kDivergenceWindow ||
                      (budget.kind == Budget::Kind::seconds && clock.seconds() >= budget.value);
    if (t == next_cp || last) {
      clock.pause();
      Checkpoint cp;
      cp.iter = t;
      cp.epochs = static_cast<double>(t);
      cp.elapsed_s = clock.seconds();
      cp.objective = f_prev;
      if (metric) cp.metric = metric(x);
      out.record.checkpoints.push_back(cp);
      if (t == next_cp) next_cp = schedule.next(t);
      if (last) break;
      clock.start();
    }
    x = baseline_step(ds, x);
    clock.pause();
    const double f = f_value(ds, x);
    rises = f > f_prev ? rises + 1 : 0;
    f_prev = f;
    clock.start();
  }
  out.record.diverged = rises >= kDivergenceWindow;
  out.final_iterate = std::move(x);
  return out;
}

}  // namespace logbarrier
