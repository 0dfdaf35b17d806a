#ifndef MAXPLUS_RNG_HPP
#define MAXPLUS_RNG_HPP

#include <cmath>
#include <cstdint>

namespace maxplus {

// SplitMix64 used as a counter-based generator: draw i of stream (seed, stream)
// is a pure function of (seed, stream, i), so replicate streams are reproducible
// independently of thread scheduling. Stream ids are assigned by callers:
//   0 .. R-1          estimator replicates (also simulate/diagnostic trajectories)
//   2^32 + run        reachability-chain exit-time runs
class SplitMix64 {
 public:
  SplitMix64(uint64_t seed, uint64_t stream)
      : key_(finalize(seed + kGamma) ^ finalize(stream ^ 0xD2B74407B1CE6E93ull)) {}

  uint64_t next_u64() { return finalize(key_ + kGamma * ++counter_); }

  // Uniform on [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Box-Muller; the spare draw is cached within the stream.
  double next_gaussian(double mu, double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return mu + sigma * spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mu + sigma * r * std::cos(theta);
  }

  // Pareto with minimum 1: P(X > x) = x^{-alpha} for x >= 1.
  double next_pareto(double alpha) { return std::pow(next_unit_open(), -1.0 / alpha); }

 private:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static uint64_t finalize(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t key_;
  uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline constexpr uint64_t kChainRunStreamBase = 1ull << 32;

}  // namespace maxplus

#endif
