#include "sifter/image.hpp"

#include <string>

#include "sifter/error.hpp"

namespace sifter {

namespace {
void require_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("image dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
}
}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  require_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  require_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("image: " + std::to_string(pixels_.size()) + " pixels for " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> pixels)
    : BinaryImage(GrayImage(width, height, std::move(pixels))) {}

BinaryImage::BinaryImage(GrayImage plane) : plane_(std::move(plane)) {
  const auto px = plane_.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] != 0 && px[i] != 255) {
      throw DataError("binary image: pixel " + std::to_string(i) + " is " +
                      std::to_string(px[i]) + ", expected 0 or 255");
    }
  }
}

Image::Image(GrayImage gray) { planes_.push_back(std::move(gray)); }

Image::Image(std::vector<GrayImage> planes) : planes_(std::move(planes)) {
  if (planes_.size() != 1 && planes_.size() != 3) {
    throw DimensionError("image: channel count must be 1 or 3, got " +
                         std::to_string(planes_.size()));
  }
  for (const auto& p : planes_) {
    if (p.width() != planes_.front().width() || p.height() != planes_.front().height()) {
      throw DimensionError("image: channel planes differ in size");
    }
  }
}

Image::Image(int width, int height, int channels, std::uint8_t fill) {
  if (channels != 1 && channels != 3) {
    throw DimensionError("image: channel count must be 1 or 3, got " + std::to_string(channels));
  }
  planes_.assign(static_cast<std::size_t>(channels), GrayImage(width, height, fill));
}

Image Image::from_interleaved(int width, int height, int channels,
                              std::span<const std::uint8_t> samples) {
  Image img(width, height, channels);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (samples.size() != count * static_cast<std::size_t>(channels)) {
    throw DimensionError("image: " + std::to_string(samples.size()) + " samples for " +
                         std::to_string(width) + "x" + std::to_string(height) + "x" +
                         std::to_string(channels));
  }
  for (int c = 0; c < channels; ++c) {
    auto dst = img.planes_[static_cast<std::size_t>(c)].pixels();
    for (std::size_t i = 0; i < count; ++i) dst[i] = samples[i * channels + c];
  }
  return img;
}

std::vector<std::uint8_t> Image::interleaved() const {
  const auto c = static_cast<std::size_t>(channels());
  const std::size_t count = static_cast<std::size_t>(width()) * height();
  std::vector<std::uint8_t> out(count * c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto src = planes_[ch].pixels();
    for (std::size_t i = 0; i < count; ++i) out[i * c + ch] = src[i];
  }
  return out;
}

}  // namespace sifter
