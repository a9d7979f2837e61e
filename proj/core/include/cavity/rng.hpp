#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace cavity {

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream key from a master seed and a stream index.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

/// Counter-based generator: output block i is philox(counter = i, key = seed).
/// Streams with different keys are independent, and the position in a stream
/// is just the counter, so replicas do not depend on scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound); bound > 0. Lemire's rejection method.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int cached_ = 0;  // 64-bit words still available in block_
};

/// Uniformly random m-subset of {0..n-1}, sorted ascending (Floyd's algorithm).
std::vector<std::uint32_t> random_subset(CounterRng& rng, std::uint32_t n,
                                         std::uint32_t m);

}  // namespace cavity
