#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qelect {

/// Deterministic random source. All protocol randomness flows through an
/// explicit Rng handle. The raw engine output is standardized (mt19937_64)
/// and the derived draws below avoid std::uniform_* distributions, whose
/// output is implementation-defined, so a seed reproduces the same stream
/// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampled.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  int bit() { return static_cast<int>(next_u64() >> 63); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices from [0, n), returned in ascending order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  /// Counter-based seed split: trial t of a run seeded with `master` uses
  /// derive_seed(master, t), so trials may execute in any order without
  /// changing results.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qelect
