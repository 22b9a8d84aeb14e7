#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sifter {

/// Single 8-bit plane, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(int x, int y) const noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& at(int x, int y) noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Plane whose pixels are all 0 or 255.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, std::vector<std::uint8_t> pixels);
  explicit BinaryImage(GrayImage plane);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  std::size_t size() const noexcept { return plane_.size(); }
  std::uint8_t at(int x, int y) const noexcept { return plane_.at(x, y); }
  std::span<const std::uint8_t> pixels() const noexcept { return plane_.pixels(); }
  const GrayImage& plane() const noexcept { return plane_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  GrayImage plane_;
};

/// Real-valued plane (local means).
struct MeanImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const noexcept {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

/// One- or three-channel image stored as separate planes.
class Image {
 public:
  Image() = default;
  explicit Image(GrayImage gray);
  explicit Image(std::vector<GrayImage> planes);
  Image(int width, int height, int channels, std::uint8_t fill = 0);

  /// Builds from interleaved samples (RGBRGB... for three channels).
  static Image from_interleaved(int width, int height, int channels,
                                std::span<const std::uint8_t> samples);
  std::vector<std::uint8_t> interleaved() const;

  int width() const noexcept { return planes_.empty() ? 0 : planes_.front().width(); }
  int height() const noexcept { return planes_.empty() ? 0 : planes_.front().height(); }
  int channels() const noexcept { return static_cast<int>(planes_.size()); }
  bool empty() const noexcept { return planes_.empty(); }

  const GrayImage& channel(int c) const { return planes_.at(static_cast<std::size_t>(c)); }
  GrayImage& channel(int c) { return planes_.at(static_cast<std::size_t>(c)); }
  const std::vector<GrayImage>& planes() const noexcept { return planes_; }

  bool same_shape(const Image& other) const noexcept {
    return width() == other.width() && height() == other.height() &&
           channels() == other.channels();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::vector<GrayImage> planes_;
};

}  // namespace sifter
