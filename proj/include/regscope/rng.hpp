#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace regscope {

// Deterministic 64-bit generator (splitmix64 finalizer over a Weyl sequence).
// Every stochastic step in the toolkit draws from this type, so a given seed
// reproduces bit-identical artifacts regardless of platform or standard
// library. Do not swap in std::mt19937 &co: their distributions are not
// byte-stable across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53 significant bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0,n), n > 0. Fixed-point multiply keeps the mapping
  // bias small and, more importantly, identical everywhere.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// splitmix64 finalizer as a standalone bijective mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent child stream from a master seed and a stream index.
// Child streams (per tree, per class, per grid cell) are keyed by index so
// that evaluation order can never reorder draws.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

// In-place Fisher-Yates shuffle driven by the deterministic generator.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace regscope
