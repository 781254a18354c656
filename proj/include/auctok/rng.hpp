#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace auctok {

// Self-contained seeded random stream (xoshiro256++ seeded via splitmix64).
// std::uniform_real_distribution is implementation-defined, so rolling the
// u64 -> double mapping by hand keeps traces byte-identical across
// standard libraries, which the reproducibility contract requires.
//
// Substreams: Rng(seed, stream) derives an independent stream per
// (path, purpose) so parallel callers never share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed); }

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t mix = seed;
    mix ^= 0x9e3779b97f4a7c15ull + (stream << 6) + (stream >> 2);
    mix = splitmix(mix) ^ splitmix(stream);
    seed_state(mix);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  void seed_state(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      sm += 0x9e3779b97f4a7c15ull;
      word = splitmix(sm);
    }
    // xoshiro must not start from the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::array<std::uint64_t, 4> s_{};
};

// Stream-id namespaces so different consumers of the same master seed
// never collide (paths use their path index, solvers use period indices).
enum class StreamKind : std::uint64_t {
  path = 0,
  solver = 1,
  accounting = 2,
  extension = 3,
  generic = 4,
};

inline std::uint64_t stream_id(StreamKind kind, std::uint64_t index) {
  return (static_cast<std::uint64_t>(kind) << 56) ^ index;
}

// Running mean / standard error accumulator with compensated summation.
class MeanAccumulator {
 public:
  void add(double x) {
    ++count_;
    kahan_add(sum_, sum_comp_, x);
    kahan_add(sumsq_, sumsq_comp_, x * x);
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }

  double variance() const {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double m = mean();
    double v = (sumsq_ - n * m * m) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }

  // Standard error of the mean.
  double se() const {
    if (count_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count_));
  }

 private:
  static void kahan_add(double& sum, double& comp, double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  std::uint64_t count_ = 0;
  double sum_ = 0.0, sum_comp_ = 0.0;
  double sumsq_ = 0.0, sumsq_comp_ = 0.0;
};

// Point estimate with sampling uncertainty, as returned by the Monte Carlo
// entry points.
struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t paths = 0;
};

}  // namespace auctok
