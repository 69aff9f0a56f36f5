#pragma once

#include <cstdint>
#include <random>

namespace riskpf {

// splitmix64 finalizer; full-avalanche 64-bit mixer.
std::uint64_t mix_bits(std::uint64_t x);

// Combines a base seed with a salt into a new seed (hash-combine style).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

double normal_pdf(double x);
double normal_cdf(double x);

// Inverse standard-normal CDF, p in (0, 1). Acklam's rational approximation
// followed by one Halley refinement; accurate to ~1e-15 away from the extreme tails.
double normal_icdf(double p);

// Deterministic random stream. Every draw is fully specified by the seed and the
// call sequence: mt19937_64 engine (output pinned by the standard) plus inverse-CDF
// transforms, so results replay bit-exactly across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Derives an independent child stream without consuming state.
  RngStream split(std::uint64_t salt) const { return RngStream(mix_seed(seed_, salt)); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1), endpoints excluded.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double stddev) {
    return mean + stddev * normal_icdf(uniform01());
  }

  // Gaussian restricted to [lo, hi] via inverse-CDF; stddev == 0 degenerates to the
  // mean, an empty interval to lo.
  double trunc_normal(double mean, double stddev, double lo, double hi);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace riskpf
