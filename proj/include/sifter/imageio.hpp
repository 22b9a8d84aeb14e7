#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sifter/dataset.hpp"
#include "sifter/image.hpp"

namespace sifter {

enum class ImageFormat { kPgm, kPpm, kPng };

/// Chooses by extension: .pgm, .ppm, .png (case-insensitive).
ImageFormat format_from_extension(const std::filesystem::path& path);
std::string extension_for(ImageFormat format);
/// PGM for one channel, PPM for three.
ImageFormat default_format(const Image& img);

/// Decodes binary PGM (P5), binary PPM (P6) or 8-bit non-interlaced PNG
/// (grey or RGB, no alpha), sniffing the format from the leading bytes.
Image decode_image(std::span<const std::uint8_t> bytes);

/// Deterministic encoding; PNM headers are always "P5\n<w> <h>\n255\n".
std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format);

Image read_image(const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format);
/// Format from the extension.
void write_image(const Image& img, const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;
  int label = 0;
};

/// Parsed "path,label" CSV. Paths are relative to `root` (the manifest's
/// directory) unless absolute.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
  int channels = 0;
  int width = 0;
  int height = 0;
};

DatasetManifest read_manifest(const std::filesystem::path& manifest_path);

/// Loads every row in order. class_count is max(label) + 1 unless
/// `min_class_count` is larger. Missing files, bad labels and shape
/// mismatches are rejected naming the manifest line.
LabeledDataset load_dataset(const std::filesystem::path& manifest_path, int min_class_count = 0);

/// Writes images as <dir>/<stem><index>.<ext> plus a "path,label" manifest;
/// returns the manifest path.
std::filesystem::path save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir,
                                   const std::string& stem = "img");

}  // namespace sifter
