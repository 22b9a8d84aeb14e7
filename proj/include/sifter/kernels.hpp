#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version. Both must produce bit-identical output;
// the integer kernels are exact and the box mean sums integers before its
// single division, so no reduction-order drift is possible.

#include <cstddef>
#include <cstdint>
#include <span>

#include "sifter/pattern.hpp"

namespace sifter::kernels {

/// Dot product of one weight row with the state vector.
inline std::int64_t row_dot(std::span<const std::int64_t> row,
                            std::span<const Spin> state) noexcept {
  std::int64_t acc = 0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * state[j];
  return acc;
}

namespace serial {

/// weights += outer(pattern, pattern) with the diagonal left untouched.
void hebbian_accumulate(std::span<std::int64_t> weights, std::size_t n,
                        std::span<const Spin> pattern);

/// out[i] = sum_j weights[i*n + j] * state[j] for every row.
void local_fields(std::span<const std::int64_t> weights, std::size_t n,
                  std::span<const Spin> state, std::span<std::int64_t> out);

/// Zero-padded "same" k x k box mean of a row-major 8-bit plane.
void box_mean(std::span<const std::uint8_t> pixels, int width, int height, int k,
              std::span<double> out);

}  // namespace serial

namespace parallel {

void hebbian_accumulate(std::span<std::int64_t> weights, std::size_t n,
                        std::span<const Spin> pattern);

void local_fields(std::span<const std::int64_t> weights, std::size_t n,
                  std::span<const Spin> state, std::span<std::int64_t> out);

/// Integral-image box mean; O(width*height) regardless of k.
void box_mean(std::span<const std::uint8_t> pixels, int width, int height, int k,
              std::span<double> out);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace sifter::kernels
