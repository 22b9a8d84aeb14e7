#include "sifter/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sifter/error.hpp"

namespace fs = std::filesystem;

namespace sifter {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

// --- PNM -----------------------------------------------------------------

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal integer.
  int number(const char* field) {
    skip_space();
    const auto start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) break;
      ++pos_;
    }
    if (pos_ == start) {
      throw ImageFormatError(ImageErrorKind::kMalformedHeader,
                             std::string("expected ") + field, start);
    }
    if (value > 1'000'000'000) {
      throw ImageFormatError(ImageErrorKind::kMalformedHeader,
                             std::string(field) + " is too large", start);
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ImageFormatError(ImageErrorKind::kMalformedHeader,
                             "expected whitespace before raster", pos_);
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;  // after the magic
};

Image decode_pnm(std::span<const std::uint8_t> bytes, int channels) {
  PnmHeaderReader header(bytes);
  const int width = header.number("width");
  const int height = header.number("height");
  const auto maxval_at = header.position();
  const int maxval = header.number("maxval");
  if (width < 1 || height < 1) {
    throw ImageFormatError(ImageErrorKind::kMalformedHeader, "zero image dimension");
  }
  if (maxval != 255) {
    throw ImageFormatError(ImageErrorKind::kUnsupportedDepth,
                           "maxval " + std::to_string(maxval) + " (only 255 is supported)",
                           maxval_at);
  }
  header.single_space();
  const auto start = header.position();
  const std::size_t need = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - start < need) {
    throw ImageFormatError(ImageErrorKind::kTruncatedPayload,
                           "raster needs " + std::to_string(need) + " bytes, file has " +
                               std::to_string(bytes.size() - start),
                           bytes.size());
  }
  return Image::from_interleaved(width, height, channels, bytes.subspan(start, need));
}

std::vector<std::uint8_t> encode_pnm(const Image& img, int channels) {
  if (img.channels() != channels) {
    throw DimensionError(std::string(channels == 1 ? "PGM" : "PPM") + " needs " +
                         std::to_string(channels) + " channel(s), image has " +
                         std::to_string(img.channels()));
  }
  const std::string header = std::string(channels == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto raster = img.interleaved();
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

// --- PNG -----------------------------------------------------------------

std::uint32_t be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  // Signature (8) + IHDR length (4) + type (4) + 13 data bytes.
  if (bytes.size() < 33) {
    throw ImageFormatError(ImageErrorKind::kTruncatedPayload, "PNG shorter than its header",
                           bytes.size());
  }
  if (std::memcmp(bytes.data() + 12, "IHDR", 4) != 0 || be32(bytes, 8) != 13) {
    throw ImageFormatError(ImageErrorKind::kMalformedHeader, "PNG does not start with IHDR", 8);
  }
  const int bit_depth = bytes[24];
  const int color_type = bytes[25];
  const int interlace = bytes[28];
  if (bit_depth != 8) {
    throw ImageFormatError(ImageErrorKind::kUnsupportedDepth,
                           "PNG bit depth " + std::to_string(bit_depth) + " (only 8 is supported)",
                           24);
  }
  if (color_type != 0 && color_type != 2) {
    throw ImageFormatError(ImageErrorKind::kUnsupportedFormat,
                           "PNG color type " + std::to_string(color_type) +
                               " (only grey and RGB without alpha are supported)",
                           25);
  }
  if (interlace != 0) {
    throw ImageFormatError(ImageErrorKind::kUnsupportedFormat, "interlaced PNG", 28);
  }

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageFormatError(ImageErrorKind::kMalformedHeader, "PNG: " + msg);
  }
  const int channels = color_type == 2 ? 3 : 1;
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageFormatError(ImageErrorKind::kTruncatedPayload, "PNG: " + msg);
  }
  return Image::from_interleaved(width, height, channels, raster);
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const auto raster = img.interleaved();

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster.data(), 0, nullptr)) {
    throw DataError(std::string("PNG encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster.data(), 0, nullptr)) {
    throw DataError(std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

ImageFormat format_from_extension(const fs::path& path) {
  const auto ext = lower(path.extension().string());
  if (ext == ".pgm") return ImageFormat::kPgm;
  if (ext == ".ppm") return ImageFormat::kPpm;
  if (ext == ".png") return ImageFormat::kPng;
  throw ConfigError("cannot infer image format from '" + path.string() + "'");
}

std::string extension_for(ImageFormat format) {
  switch (format) {
    case ImageFormat::kPgm: return ".pgm";
    case ImageFormat::kPpm: return ".ppm";
    case ImageFormat::kPng: return ".png";
  }
  return ".png";
}

ImageFormat default_format(const Image& img) {
  return img.channels() == 3 ? ImageFormat::kPpm : ImageFormat::kPgm;
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pnm(bytes, 1);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_pnm(bytes, 3);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
    return decode_png(bytes);
  }
  throw ImageFormatError(ImageErrorKind::kUnsupportedFormat,
                         "not a binary PGM, binary PPM or PNG file", 0);
}

std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format) {
  if (img.empty()) throw DimensionError("cannot encode an empty image");
  switch (format) {
    case ImageFormat::kPgm: return encode_pnm(img, 1);
    case ImageFormat::kPpm: return encode_pnm(img, 3);
    case ImageFormat::kPng: return encode_png(img);
  }
  throw ConfigError("unknown image format");
}

Image read_image(const fs::path& path) {
  const auto bytes = slurp(path);
  try {
    return decode_image(bytes);
  } catch (const ImageFormatError& e) {
    throw ImageFormatError(e.kind(), path.string() + ": " + e.what());
  }
}

void write_image(const Image& img, const fs::path& path, ImageFormat format) {
  const auto bytes = encode_image(img, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

void write_image(const Image& img, const fs::path& path) {
  write_image(img, path, format_from_extension(path));
}

DatasetManifest read_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError(manifest_path.string(), "cannot open manifest");
  DatasetManifest manifest;
  manifest.root = manifest_path.parent_path();

  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "path,label") {
        throw DataError(manifest_path.string() + ":" + std::to_string(line_no) +
                        ": expected header 'path,label'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0) {
      throw DataError(manifest_path.string() + ":" + std::to_string(line_no) +
                      ": expected 'path,label'");
    }
    const std::string label_text = line.substr(comma + 1);
    int label = -1;
    const auto [p, ec] =
        std::from_chars(label_text.data(), label_text.data() + label_text.size(), label);
    if (ec != std::errc() || p != label_text.data() + label_text.size() || label < 0) {
      throw DataError(manifest_path.string() + ":" + std::to_string(line_no) + ": bad label '" +
                      label_text + "'");
    }
    manifest.entries.push_back({line.substr(0, comma), label});
  }
  // A completely empty file is accepted as an empty manifest.
  return manifest;
}

LabeledDataset load_dataset(const fs::path& manifest_path, int min_class_count) {
  const auto manifest = read_manifest(manifest_path);
  LabeledDataset ds;
  ds.class_count = min_class_count;
  // Data rows start on line 2, after the header.
  int line_no = 1;
  for (const auto& entry : manifest.entries) {
    ++line_no;
    const fs::path file = fs::path(entry.path).is_absolute() ? fs::path(entry.path)
                                                             : manifest.root / entry.path;
    const auto where = manifest_path.string() + ":" + std::to_string(line_no) + ": ";
    if (!fs::exists(file)) throw DataError(where + "missing file " + file.string());
    Image img;
    try {
      img = read_image(file);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    if (!ds.items.empty() && !img.same_shape(ds.items.front().image)) {
      const auto& ref = ds.items.front().image;
      throw DimensionError(where + file.string() + " is " + std::to_string(img.width()) + "x" +
                           std::to_string(img.height()) + "x" + std::to_string(img.channels()) +
                           ", dataset is " + std::to_string(ref.width()) + "x" +
                           std::to_string(ref.height()) + "x" + std::to_string(ref.channels()));
    }
    LabeledItem item;
    item.image = std::move(img);
    item.label = entry.label;
    item.original_label = entry.label;
    item.name = entry.path;
    ds.class_count = std::max(ds.class_count, entry.label + 1);
    ds.items.push_back(std::move(item));
  }
  return ds;
}

fs::path save_dataset(const LabeledDataset& ds, const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  const auto manifest_path = dir / "manifest.csv";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw IoError(manifest_path.string(), "cannot open for writing");
  manifest << "path,label\n";
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    const auto& item = ds.items[i];
    char index[16];
    std::snprintf(index, sizeof index, "%06zu", i);
    const auto format = default_format(item.image);
    const std::string name = stem + index + extension_for(format);
    write_image(item.image, dir / name, format);
    manifest << name << ',' << item.label << '\n';
  }
  if (!manifest) throw IoError(manifest_path.string(), "write failed");
  return manifest_path;
}

}  // namespace sifter
