#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace logbarrier {

/// Stopping rule for a run: a number of iterations, of epochs (full passes
/// over the dataset), or of wall-clock seconds.
struct Budget {
  enum class Kind { iterations, epochs, seconds };
  Kind kind = Kind::iterations;
  double value = 1;

  static Budget iterations(long n) { return {Kind::iterations, static_cast<double>(n)}; }
  static Budget epochs(double e) { return {Kind::epochs, e}; }
  static Budget seconds(double s) { return {Kind::seconds, s}; }

  /// Parses "iters:N", "epochs:E" or "seconds:S".
  static Budget parse(const std::string& text);
  std::string to_string() const;

  /// Iteration cap implied by the budget; unbounded for wall-clock budgets.
  /// `iters_per_epoch` is n/B for B-sample methods and 1 for batch methods.
  long max_iterations(double iters_per_epoch) const;
};

/// Geometric checkpoint schedule: 1, then max(t+1, ceil(ratio*t)).
struct CheckpointSchedule {
  double ratio = 1.25;
  long next(long t) const {
    const auto g = static_cast<long>(std::ceil(ratio * static_cast<double>(t) - 1e-9));
    return g > t ? g : t + 1;
  }
};

struct Checkpoint {
  long iter = 0;
  double epochs = 0;
  double elapsed_s = 0;
  double objective = 0;
  double metric = std::numeric_limits<double>::quiet_NaN();
};

/// Checkpointed convergence trace.
struct RunRecord {
  std::vector<Checkpoint> checkpoints;
  std::string metric_name = "none";
  bool diverged = false;

  double best_objective() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : checkpoints) best = c.objective < best ? c.objective : best;
    return best;
  }
  /// objective minus `reference` (the best objective of the experiment set).
  std::vector<double> optimization_errors(double reference) const {
    std::vector<double> out;
    out.reserve(checkpoints.size());
    for (const auto& c : checkpoints) out.push_back(c.objective - reference);
    return out;
  }
};

/// Monotonic stopwatch that can be paused while checkpoints are evaluated.
class Stopwatch {
 public:
  using clock = std::chrono::steady_clock;
  void start() {
    running_ = true;
    t0_ = clock::now();
  }
  void pause() {
    if (running_) acc_ += std::chrono::duration<double>(clock::now() - t0_).count();
    running_ = false;
  }
  double seconds() const {
    return running_ ? acc_ + std::chrono::duration<double>(clock::now() - t0_).count() : acc_;
  }

 private:
  clock::time_point t0_{};
  double acc_ = 0.0;
  bool running_ = false;
};

}  // namespace logbarrier
