#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace idsm {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream seed for path `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// mt19937_64 with hand-rolled transforms, so draws are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exp(1) via -log1p(-u).
  double exponential();
  /// Standard normal (Box-Muller, second value cached).
  double normal();
  /// Index i with probability weights[i] / sum(weights).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace idsm
