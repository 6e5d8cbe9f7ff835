#pragma once

#include <cstdint>
#include <random>

namespace netconc {

/// Public seed-mixing function: derives an independent stream seed from a
/// master seed and a stream index (replicate number, restart number, ...).
/// splitmix64 finalizer over an affine combination; stable across versions,
/// so parallel sampling is order-independent and reproducible.
constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with canonical conversions, so the draw sequence for a given
/// seed is pinned by this header and not by library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Modulo reduction; bias is < n / 2^64.
  std::uint64_t next_below(std::uint64_t n) { return gen_() % n; }

  int next_int_below(int n) { return static_cast<int>(next_below(static_cast<std::uint64_t>(n))); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace netconc
