#pragma once

#include <cstdint>
#include <string>

namespace pinndd {

/// Counter-based generator (Philox 4x64 with 10 rounds, the variant used by
/// numpy). A stream is identified by (seed, stream id); draws are a pure
/// function of (key, counter), so independent streams never interact and
/// results do not depend on the order streams are created or consumed.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "philox4x64-10/v1";

  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal draw (Box-Muller, pairs cached).
  double next_normal();

 private:
  void refill();

  std::uint64_t key_[2];
  std::uint64_t counter_[4];
  std::uint64_t block_[4];
  int block_pos_;
  double normal_cache_;
  bool has_normal_cache_;
};

/// Raw Philox 4x64-10 block function, exposed for known-answer tests.
void philox4x64_block(const std::uint64_t counter[4], const std::uint64_t key[2],
                      std::uint64_t out[4]);

}  // namespace pinndd
