#pragma once

#include <cstdint>
#include <string>

#include "sifter/image.hpp"
#include "sifter/pattern.hpp"

namespace sifter {

/// y = 2p/255 - 1.
double map_to_spin(int pixel);

/// 255 where pixel > threshold, else 0.
BinaryImage binarize_global(const GrayImage& img, int threshold);

/// Zero-padded k x k box mean, same size as the input. k must be odd and
/// at most 2*min(width, height) - 1.
MeanImage local_mean(const GrayImage& img, int k);

/// 255 where I(x,y) > M(x,y), else 0, with M the k x k local mean.
BinaryImage binarize_local_diff(const GrayImage& img, int k);

/// Row-major; 255 -> +1, 0 -> -1.
BinaryPattern image_to_pattern(const BinaryImage& img);

BinaryImage pattern_to_image(const BinaryPattern& pattern, int width, int height);

/// How a grayscale plane becomes a binary one.
struct Binarization {
  enum class Mode { kGlobal, kLocalDiff };

  Mode mode = Mode::kGlobal;
  int threshold = 127;
  int k_size = 21;

  static Binarization global(int threshold = 127) { return {Mode::kGlobal, threshold, 21}; }
  static Binarization local_diff(int k) { return {Mode::kLocalDiff, 127, k}; }

  BinaryImage apply(const GrayImage& img) const;

  friend bool operator==(const Binarization&, const Binarization&) = default;
};

std::string to_string(Binarization::Mode mode);
Binarization::Mode parse_binarize_mode(const std::string& text);

}  // namespace sifter
