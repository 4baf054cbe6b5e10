#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace recpart {

// splitmix64 step; used both as a seed scrambler and to derive
// independent per-replicate streams from one base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream seed for replicate `index`: two splitmix64 rounds over the base
// seed offset by the (index+1)-th multiple of the golden-ratio increment.
// Replicates are independent of evaluation order by construction.
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
  (void)splitmix64(s);
  return splitmix64(s);
}

// mt19937_64 with hand-rolled inverse-transform samplers so that streams are
// identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(scramble(seed)) {}

  std::uint64_t bits() { return engine_(); }

  // uniform on [0,1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform on (0,1); safe as a log() argument
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  // unbiased integer on [0,n) by rejection
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Knuth product method, chunked so the running product never underflows.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 32.0) {
      total += poisson_knuth(32.0);
      mean -= 32.0;
    }
    return total + poisson_knuth(mean);
  }

 private:
  std::uint64_t poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_open();
    } while (p > limit);
    return k - 1;
  }

  static std::uint64_t scramble(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64(s);
  }

  std::mt19937_64 engine_;
};

}  // namespace recpart
