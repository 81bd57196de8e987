#pragma once

#include "nearkit/matlin.hpp"

#include <cstdint>
#include <random>

namespace nearkit {

using Rng = std::mt19937_64;

/// i.i.d. standard normal entries, filled in column-major order.
inline Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix M(rows, cols);
  for (Index k = 0; k < M.size(); ++k) M.data()[k] = normal(rng);
  return M;
}

inline Vector gaussian_vector(Index n, Rng& rng) { return gaussian(n, 1, rng); }

/// Mixes several integers into one seed so that streams for different
/// (case, p, trial) tuples do not overlap.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace nearkit
