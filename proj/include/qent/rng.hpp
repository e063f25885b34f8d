#pragma once

#include <cstdint>
#include <random>

namespace qent {

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-sample seed from (master seed, sample index), independent of the
/// order in which samples are generated.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// mt19937_64 with a fixed uniform-double conversion so streams are
/// bitwise reproducible across standard libraries.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qent
