#include "sifter/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sifter::kernels {

namespace {

// Number of in-bounds rows/cols of a centered window of half-width r.
inline int clamp_lo(int c, int r) { return c - r < 0 ? 0 : c - r; }
inline int clamp_hi(int c, int r, int extent) { return c + r >= extent ? extent - 1 : c + r; }

}  // namespace

namespace serial {

void hebbian_accumulate(std::span<std::int64_t> weights, std::size_t n,
                        std::span<const Spin> pattern) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t si = pattern[i];
    std::int64_t* row = weights.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row[j] += si * pattern[j];
    }
  }
}

void local_fields(std::span<const std::int64_t> weights, std::size_t n,
                  std::span<const Spin> state, std::span<std::int64_t> out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = row_dot(weights.subspan(i * n, n), state);
}

void box_mean(std::span<const std::uint8_t> pixels, int width, int height, int k,
              std::span<double> out) {
  const int r = k / 2;
  const double area = static_cast<double>(k) * k;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::int64_t sum = 0;
      for (int yy = clamp_lo(y, r); yy <= clamp_hi(y, r, height); ++yy) {
        for (int xx = clamp_lo(x, r); xx <= clamp_hi(x, r, width); ++xx) {
          sum += pixels[static_cast<std::size_t>(yy) * width + xx];
        }
      }
      out[static_cast<std::size_t>(y) * width + x] = static_cast<double>(sum) / area;
    }
  }
}

}  // namespace serial

namespace parallel {

void hebbian_accumulate(std::span<std::int64_t> weights, std::size_t n,
                        std::span<const Spin> pattern) {
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t si = pattern[i];
    std::int64_t* __restrict__ row = weights.data() + i * count;
    const Spin* __restrict__ p = pattern.data();
#pragma omp simd
    for (std::int64_t j = 0; j < count; ++j) row[j] += si * p[j];
    row[i] -= si * si;
  }
}

void local_fields(std::span<const std::int64_t> weights, std::size_t n,
                  std::span<const Spin> state, std::span<std::int64_t> out) {
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t* __restrict__ row = weights.data() + i * count;
    const Spin* __restrict__ s = state.data();
    std::int64_t acc = 0;
#pragma omp simd reduction(+ : acc)
    for (std::int64_t j = 0; j < count; ++j) acc += row[j] * s[j];
    out[i] = acc;
  }
}

void box_mean(std::span<const std::uint8_t> pixels, int width, int height, int k,
              std::span<double> out) {
  // Integral image with a zero row/column in front: S[y][x] = sum of pixels
  // in [0,y) x [0,x).
  const int stride = width + 1;
  std::vector<std::int64_t> sat(static_cast<std::size_t>(stride) * (height + 1), 0);
  for (int y = 0; y < height; ++y) {
    std::int64_t row_sum = 0;
    for (int x = 0; x < width; ++x) {
      row_sum += pixels[static_cast<std::size_t>(y) * width + x];
      sat[static_cast<std::size_t>(y + 1) * stride + x + 1] =
          sat[static_cast<std::size_t>(y) * stride + x + 1] + row_sum;
    }
  }
  const int r = k / 2;
  const double area = static_cast<double>(k) * k;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const int y0 = clamp_lo(y, r);
    const int y1 = clamp_hi(y, r, height) + 1;
    for (int x = 0; x < width; ++x) {
      const int x0 = clamp_lo(x, r);
      const int x1 = clamp_hi(x, r, width) + 1;
      const std::int64_t sum = sat[static_cast<std::size_t>(y1) * stride + x1] -
                               sat[static_cast<std::size_t>(y0) * stride + x1] -
                               sat[static_cast<std::size_t>(y1) * stride + x0] +
                               sat[static_cast<std::size_t>(y0) * stride + x0];
      out[static_cast<std::size_t>(y) * width + x] = static_cast<double>(sum) / area;
    }
  }
}

}  // namespace parallel

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sifter::kernels
