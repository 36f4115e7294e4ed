#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bcmsim {

// splitmix64 finalizer. Used to spread master seeds into well-separated
// per-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic random stream. std::mt19937_64 output is pinned by the
// standard; every value mapping lives here instead of std::*_distribution,
// whose results are implementation-defined. Same seed, same sequence,
// any platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  // Independent stream derived from a master seed and a stream id. Adding a
  // new stream id never perturbs draws taken from existing streams.
  static RandomStream substream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RandomStream(mix_seed(master_seed + (stream_id + 1) * 0xD1B54A32D192ED03ull));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Exponential with the given mean; finite for every draw since
  // uniform01() < 1.
  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  // Uniform integer in [0, n). Modulo bias is < n / 2^64, irrelevant for the
  // small n used here.
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bcmsim
