#include "pinndd/rng.hpp"

#include <cmath>

namespace pinndd {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
  const auto prod = static_cast<unsigned __int128>(a) * b;
  *hi = static_cast<std::uint64_t>(prod >> 64);
  return static_cast<std::uint64_t>(prod);
}

}  // namespace

void philox4x64_block(const std::uint64_t counter[4], const std::uint64_t key[2],
                      std::uint64_t out[4]) {
  std::uint64_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, hi1;
    const std::uint64_t lo0 = mulhilo(kMul0, c0, &hi0);
    const std::uint64_t lo1 = mulhilo(kMul1, c2, &hi1);
    const std::uint64_t n0 = hi1 ^ c1 ^ k0;
    const std::uint64_t n1 = lo1;
    const std::uint64_t n2 = hi0 ^ c3 ^ k1;
    const std::uint64_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  out[0] = c0;
  out[1] = c1;
  out[2] = c2;
  out[3] = c3;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_{seed, stream},
      counter_{0, 0, 0, 0},
      block_pos_(4),
      normal_cache_(0.0),
      has_normal_cache_(false) {}

void Rng::refill() {
  // 256-bit counter increment happens before each block, matching numpy.
  for (int i = 0; i < 4; ++i) {
    if (++counter_[i] != 0) break;
  }
  philox4x64_block(counter_, key_, block_);
  block_pos_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (block_pos_ >= 4) refill();
  return block_[block_pos_++];
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

std::uint64_t Rng::below(std::uint64_t n) {
  return static_cast<std::uint64_t>(next_double() * static_cast<double>(n));
}

double Rng::next_normal() {
  if (has_normal_cache_) {
    has_normal_cache_ = false;
    return normal_cache_;
  }
  double u1 = next_double();
  const double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double mag = std::sqrt(-2.0 * std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  normal_cache_ = mag * std::sin(two_pi * u2);
  has_normal_cache_ = true;
  return mag * std::cos(two_pi * u2);
}

}  // namespace pinndd
