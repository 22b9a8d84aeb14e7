#include "sifter/binarize.hpp"

#include <algorithm>
#include <string>

#include "sifter/error.hpp"
#include "sifter/kernels.hpp"

namespace sifter {

double map_to_spin(int pixel) {
  if (pixel < 0 || pixel > 255) {
    throw ConfigError("map_to_spin: pixel " + std::to_string(pixel) + " outside [0, 255]");
  }
  return (2.0 * pixel) / 255.0 - 1.0;
}

BinaryImage binarize_global(const GrayImage& img, int threshold) {
  if (threshold < 0 || threshold > 255) {
    throw ConfigError("binarize_global: threshold " + std::to_string(threshold) +
                      " outside [0, 255]");
  }
  std::vector<std::uint8_t> out(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = px[i] > threshold ? 255 : 0;
  return BinaryImage(img.width(), img.height(), std::move(out));
}

MeanImage local_mean(const GrayImage& img, int k) {
  if (k < 1 || k % 2 == 0) {
    throw ConfigError("local_mean: kernel size must be odd and positive, got " +
                      std::to_string(k));
  }
  const int limit = 2 * std::min(img.width(), img.height()) - 1;
  if (k > limit) {
    throw ConfigError("local_mean: kernel size " + std::to_string(k) + " exceeds " +
                      std::to_string(limit) + " for a " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()) + " image");
  }
  MeanImage out{img.width(), img.height(), std::vector<double>(img.size())};
  kernels::parallel::box_mean(img.pixels(), img.width(), img.height(), k, out.values);
  return out;
}

BinaryImage binarize_local_diff(const GrayImage& img, int k) {
  const auto mean = local_mean(img, k);
  std::vector<std::uint8_t> out(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    out[i] = static_cast<double>(px[i]) > mean.values[i] ? 255 : 0;
  }
  return BinaryImage(img.width(), img.height(), std::move(out));
}

BinaryPattern image_to_pattern(const BinaryImage& img) {
  std::vector<Spin> spins(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) spins[i] = px[i] == 255 ? 1 : -1;
  return BinaryPattern(std::move(spins));
}

BinaryImage pattern_to_image(const BinaryPattern& pattern, int width, int height) {
  if (width < 1 || height < 1 ||
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != pattern.size()) {
    throw DimensionError("pattern_to_image: pattern of length " +
                         std::to_string(pattern.size()) + " cannot fill " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<std::uint8_t> px(pattern.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = pattern[i] > 0 ? 255 : 0;
  return BinaryImage(width, height, std::move(px));
}

BinaryImage Binarization::apply(const GrayImage& img) const {
  return mode == Mode::kGlobal ? binarize_global(img, threshold)
                               : binarize_local_diff(img, k_size);
}

std::string to_string(Binarization::Mode mode) {
  return mode == Binarization::Mode::kGlobal ? "global" : "localdiff";
}

Binarization::Mode parse_binarize_mode(const std::string& text) {
  if (text == "global") return Binarization::Mode::kGlobal;
  if (text == "localdiff" || text == "local_diff") return Binarization::Mode::kLocalDiff;
  throw ConfigError("unknown binarize mode '" + text + "' (expected global or localdiff)");
}

}  // namespace sifter
