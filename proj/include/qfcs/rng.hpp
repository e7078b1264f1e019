#pragma once

#include <cstdint>
#include <random>

namespace qfcs {

/// Deterministic uniform source. mt19937_64 is fully specified by the
/// standard and the 53-bit mapping below avoids the implementation-defined
/// std::*_distribution adaptors, so identical seeds give identical draws on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; decorrelates seeds for independent streams derived
/// from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace qfcs
