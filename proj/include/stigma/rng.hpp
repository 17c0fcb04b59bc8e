#ifndef STIGMA_RNG_HPP
#define STIGMA_RNG_HPP

#include <cstdint>

namespace stigma {

/**
 * SplitMix64 (Steele, Lea & Flood): 64-bit state advanced by the golden-ratio
 * increment, one multiply-xorshift finalizer per output.
 *
 * Used instead of <random> because the replay guarantees require a generator
 * whose entire algorithm is pinned down here: identical seeds must yield
 * identical simulations on every platform, compiler, and build mode. The
 * standard distributions are implementation-defined and would break that.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /** Uniform double in [0, 1), 53 random bits. */
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  /** Uniform integer in [0, n), n >= 1. Rejection sampling; no modulo bias. */
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

/** Stateless SplitMix64 finalizer. */
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/**
 * Seed for an independent stream derived from (seed, index). Replication k of
 * a study uses stream index k; the simulator itself runs on stream 0.
 */
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace stigma

#endif  // STIGMA_RNG_HPP
