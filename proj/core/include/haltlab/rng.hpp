#pragma once

#include <cstdint>
#include <random>

namespace haltlab {

// Identifies the random stream of one Monte Carlo sample.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;

  friend bool operator==(const SeedPath&, const SeedPath&) = default;
};

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// 64-bit seed of the stream for `path`:
//   splitmix64(splitmix64(master_seed) ^ splitmix64(~sample_index))
constexpr std::uint64_t stream_seed(const SeedPath& path) {
  return splitmix64(splitmix64(path.master_seed) ^ splitmix64(~path.sample_index));
}

// Per-sample random stream: std::mt19937_64 (fully specified by the standard)
// seeded with stream_seed(path). Variates are produced by fixed formulas
// below rather than std::*_distribution, whose algorithms are
// implementation-defined, so output is identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(const SeedPath& path) : engine_(stream_seed(path)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // +1 or -1 with equal probability (top bit).
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  // Standard normal by the Marsaglia polar method; the second variate of
  // each accepted pair is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace haltlab
