#ifndef RADARCOX_RNG_HPP
#define RADARCOX_RNG_HPP

#include <cstdint>
#include <random>

namespace radarcox {

/// Deterministic RNG with per-stream substreams derived from
/// (seed, stream index), so parallel work never depends on scheduling.
/// All samplers are implemented here; nothing uses the (implementation
/// defined) standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    const std::uint32_t w[4] = {
        static_cast<std::uint32_t>(splitmix(s)), static_cast<std::uint32_t>(splitmix(s) >> 32),
        static_cast<std::uint32_t>(splitmix(s)), static_cast<std::uint32_t>(splitmix(s) >> 32)};
    std::seed_seq seq(w, w + 4);
    eng_.seed(seq);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential with the given mean.
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  /// Poisson by summing unit-rate exponential gaps; exact for any mean.
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::uint64_t k = 0;
    double t = exponential(1.0);
    while (t < mean) {
      ++k;
      t += exponential(1.0);
    }
    return k;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
};

}  // namespace radarcox

#endif
