#pragma once

#include <cstdint>
#include <random>

namespace logbarrier {

/// Seeded random stream. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; all derived variates are computed here rather
/// than through <random> distributions, which are implementation-defined.
class RngStream {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }

  /// Uniform integer on [0, n), unbiased (rejection on the top range).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Poisson variate with the given mean (inversion below 30, PTRD above).
  std::int64_t poisson(double mean);

 private:
  std::int64_t poisson_ptrd(double mean);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace logbarrier
