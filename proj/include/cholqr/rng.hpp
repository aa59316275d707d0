#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cholqr/types.hpp"

namespace cholqr {

/// Counter-based pseudo-random generator (SplitMix64 output function,
/// Steele/Lea/Flood constants). The value at position k of the stream with a
/// given seed is a pure function of (seed, k), so any slice of a stream can be
/// produced independently, in any order, on any worker, with bitwise identical
/// results. All randomness in this repository flows through explicit seeds.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kMix1 = 0xBF58476D1CE4E5B9ull;
inline constexpr std::uint64_t kMix2 = 0x94D049BB133111EBull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * kMix1;
  z = (z ^ (z >> 27)) * kMix2;
  return z ^ (z >> 31);
}

/// 64 random bits at stream position k.
inline std::uint64_t bits_at(std::uint64_t seed, std::uint64_t k) {
  return mix64(seed + (k + 1) * kGolden);
}

/// Derive an independent child seed; used to split streams (per retry, per
/// sketch, per power-iteration round) without correlating draws.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed ^ mix64(salt + 0x51ED270B8A5EC473ull));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double unit_at(std::uint64_t seed, std::uint64_t k) {
  return static_cast<double>(bits_at(seed, k) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; position k consumes the uniform pair
/// (2*floor(k/2), 2*floor(k/2)+1). No rejection, so the mapping from counter
/// to value is static.
inline double gaussian_at(std::uint64_t seed, std::uint64_t k) {
  const std::uint64_t pair = k / 2;
  // u1 in (0, 1] so the log never sees zero.
  const double u1 = static_cast<double>((bits_at(seed, 2 * pair) >> 11) + 1) * 0x1.0p-53;
  const double u2 = unit_at(seed, 2 * pair + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return (k % 2 == 0) ? r * std::cos(a) : r * std::sin(a);
}

/// Sequential view over a counter stream.
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint64_t start = 0) : seed_(seed), pos_(start) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return pos_; }

  std::uint64_t next_bits() { return bits_at(seed_, pos_++); }
  double next_unit() { return unit_at(seed_, pos_++); }

  /// Uniform integer in [0, bound).
  Index next_index(Index bound) {
    return static_cast<Index>(next_unit() * static_cast<double>(bound));
  }

  double next_gaussian() {
    const double g = gaussian_at(seed_, pos_);
    pos_ += 1;
    return g;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t pos_;
};

/// rows x cols matrix of i.i.d. N(0,1) entries; entry (i, j) sits at counter
/// position i*cols + j, independent of how the matrix is materialized.
inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      g(i, j) = gaussian_at(seed, static_cast<std::uint64_t>(i * cols + j));
  return g;
}

}  // namespace rng
}  // namespace cholqr
