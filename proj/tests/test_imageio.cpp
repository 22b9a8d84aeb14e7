#include <png.h>

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sifter/error.hpp"
#include "sifter/imageio.hpp"

using namespace sifter;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> payload) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Image random_image(int w, int h, int c, Rng& rng) {
  std::vector<GrayImage> planes;
  for (int i = 0; i < c; ++i) planes.push_back(oracle::random_gray(w, h, rng));
  return Image(std::move(planes));
}

ImageErrorKind decode_error_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_image(bytes);
  } catch (const ImageFormatError& e) {
    return e.kind();
  }
  FAIL("decode did not throw");
  return ImageErrorKind::kUnsupportedFormat;
}

// Encodes with libpng's simplified writer, independently of the library's
// encoder. Used to feed inputs such as grey+alpha that the encoder never
// produces.
std::vector<std::uint8_t> reference_png(int w, int h, std::uint32_t format,
                                        const std::vector<std::uint8_t>& samples) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = format;
  png_alloc_size_t size = 0;
  REQUIRE(png_image_write_get_memory_size(image, size, 0, samples.data(), 0, nullptr));
  std::vector<std::uint8_t> out(size);
  REQUIRE(png_image_write_to_memory(&image, out.data(), &size, 0, samples.data(), 0, nullptr));
  out.resize(size);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sifter_imageio_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("P5 decode example") {
  const auto img = decode_image(bytes_of("P5 2 2 255\n", {0, 255, 128, 64}));
  REQUIRE(img.channels() == 1);
  CHECK(img.width() == 2);
  CHECK(img.height() == 2);
  CHECK(img.channel(0) == GrayImage(2, 2, {0, 255, 128, 64}));
}

TEST_CASE("PNM headers may carry comments") {
  const auto img = decode_image(bytes_of("P5\n# made by hand\n1 2\n# again\n255\n", {7, 9}));
  CHECK(img.channel(0) == GrayImage(1, 2, {7, 9}));
}

TEST_CASE("decode errors fall into distinct categories") {
  CHECK(decode_error_kind(bytes_of("P6 1 1 65535\n", {0, 0, 0, 0, 0, 0})) ==
        ImageErrorKind::kUnsupportedDepth);
  CHECK(decode_error_kind(bytes_of("P6 1 1 15\n", {0, 0, 0})) == ImageErrorKind::kUnsupportedDepth);
  CHECK(decode_error_kind(bytes_of("P5 2 2 255\n", {1, 2, 3})) == ImageErrorKind::kTruncatedPayload);
  CHECK(decode_error_kind(bytes_of("P5 x 2 255\n", {})) == ImageErrorKind::kMalformedHeader);
  CHECK(decode_error_kind(bytes_of("P2 1 1 255\n0\n", {})) == ImageErrorKind::kUnsupportedFormat);
  CHECK(decode_error_kind(bytes_of("GIF89a", {})) == ImageErrorKind::kUnsupportedFormat);

  try {
    decode_image(bytes_of("P5 2 2 255\n", {1, 2, 3}));
  } catch (const ImageFormatError& e) {
    CHECK(e.offset().has_value());
  }
}

TEST_CASE("PNG with alpha or 16-bit depth is rejected") {
  const auto ga = reference_png(2, 1, PNG_FORMAT_GA, {10, 255, 20, 255});
  CHECK(decode_error_kind(ga) == ImageErrorKind::kUnsupportedFormat);
  const auto rgba = reference_png(1, 1, PNG_FORMAT_RGBA, {1, 2, 3, 4});
  CHECK(decode_error_kind(rgba) == ImageErrorKind::kUnsupportedFormat);
  const auto linear = reference_png(1, 1, PNG_FORMAT_LINEAR_Y, {0, 0});
  CHECK(decode_error_kind(linear) == ImageErrorKind::kUnsupportedDepth);
}

TEST_CASE("PNG written by libpng decodes pixel-exactly") {
  const std::vector<std::uint8_t> rgb{1, 2, 3, 40, 50, 60, 200, 210, 220, 9, 8, 7};
  const auto img = decode_image(reference_png(2, 2, PNG_FORMAT_RGB, rgb));
  REQUIRE(img.channels() == 3);
  CHECK(img.interleaved() == rgb);
  const auto gray = decode_image(reference_png(3, 1, PNG_FORMAT_GRAY, {0, 128, 255}));
  CHECK(gray.channel(0) == GrayImage(3, 1, {0, 128, 255}));
}

TEST_CASE("fixed P5 serialization") {
  CHECK(encode_image(Image(1, 1, 1, 0), ImageFormat::kPgm) == bytes_of("P5\n1 1\n255\n", {0}));
  const auto ppm = encode_image(Image::from_interleaved(1, 1, 3, std::vector<std::uint8_t>{1, 2, 3}),
                                ImageFormat::kPpm);
  CHECK(ppm == bytes_of("P6\n1 1\n255\n", {1, 2, 3}));
  CHECK_THROWS_AS(encode_image(Image(1, 1, 3), ImageFormat::kPgm), DimensionError);
  CHECK_THROWS_AS(encode_image(Image(1, 1, 1), ImageFormat::kPpm), DimensionError);
}

TEST_CASE("decode(encode(x)) == x and encoding is deterministic") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng.uniform_index(40));
    const int h = 1 + static_cast<int>(rng.uniform_index(40));
    for (int c : {1, 3}) {
      const auto img = random_image(w, h, c, rng);
      const auto pnm = c == 1 ? ImageFormat::kPgm : ImageFormat::kPpm;
      for (auto f : {pnm, ImageFormat::kPng}) {
        const auto bytes = encode_image(img, f);
        CHECK(bytes == encode_image(img, f));
        CHECK(decode_image(bytes) == img);
      }
    }
  }
}

TEST_CASE("binary three-channel images keep only 0x00/0xFF payload bytes") {
  Rng rng(2);
  std::vector<GrayImage> planes;
  for (int c = 0; c < 3; ++c) {
    GrayImage g(5, 4);
    for (auto& p : g.pixels()) p = rng.coin() ? 255 : 0;
    planes.push_back(g);
  }
  const Image img(planes);
  const auto ppm = encode_image(img, ImageFormat::kPpm);
  const std::string header = "P6\n5 4\n255\n";
  for (std::size_t i = header.size(); i < ppm.size(); ++i) CHECK((ppm[i] == 0 || ppm[i] == 255));
  CHECK(decode_image(encode_image(img, ImageFormat::kPng)) == img);
}

TEST_CASE("file round trip and extension handling") {
  TempDir dir;
  Rng rng(3);
  const auto gray = random_image(6, 5, 1, rng);
  const auto colour = random_image(6, 5, 3, rng);
  write_image(gray, dir.path / "a.pgm");
  write_image(colour, dir.path / "b.PPM");
  write_image(colour, dir.path / "c.png");
  CHECK(read_image(dir.path / "a.pgm") == gray);
  CHECK(read_image(dir.path / "b.PPM") == colour);
  CHECK(read_image(dir.path / "c.png") == colour);

  CHECK(format_from_extension("x.Png") == ImageFormat::kPng);
  CHECK_THROWS_AS(format_from_extension("x.jpg"), ConfigError);
  CHECK(default_format(gray) == ImageFormat::kPgm);
  CHECK(default_format(colour) == ImageFormat::kPpm);
  CHECK(extension_for(ImageFormat::kPpm) == ".ppm");

  CHECK_THROWS_AS(read_image(dir.path / "missing.pgm"), IoError);
  CHECK_THROWS_AS(write_image(gray, dir.path / "no" / "such" / "dir.pgm"), IoError);
}

TEST_CASE("load_dataset") {
  TempDir dir;
  Rng rng(4);

  write_text(dir.path / "empty.csv", "path,label\n");
  const auto empty = load_dataset(dir.path / "empty.csv");
  CHECK(empty.empty());

  write_image(random_image(4, 4, 1, rng), dir.path / "a.pgm");
  write_image(random_image(4, 4, 1, rng), dir.path / "b.pgm");
  write_image(random_image(5, 4, 1, rng), dir.path / "odd.pgm");

  write_text(dir.path / "ok.csv", "path,label\nb.pgm,2\na.pgm,0\n");
  const auto ok = load_dataset(dir.path / "ok.csv");
  REQUIRE(ok.size() == 2);
  CHECK(ok.items[0].label == 2);
  CHECK(ok.items[0].image == read_image(dir.path / "b.pgm"));
  CHECK(ok.class_count == 3);
  CHECK(load_dataset(dir.path / "ok.csv", 10).class_count == 10);

  auto error_of = [&](const std::string& text) {
    write_text(dir.path / "bad.csv", text);
    try {
      load_dataset(dir.path / "bad.csv");
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(error_of("path,label\na.pgm,0\nodd.pgm,1\n").find("bad.csv:3") != std::string::npos);
  CHECK(error_of("path,label\na.pgm,0\nnope.pgm,1\n").find("bad.csv:3") != std::string::npos);
  CHECK(error_of("path,label\na.pgm,-1\n").find("bad.csv:2") != std::string::npos);
  CHECK(error_of("path,label\na.pgm,x\n").find("bad.csv:2") != std::string::npos);
  CHECK(error_of("file,class\na.pgm,0\n") != "no error");
}

TEST_CASE("save_dataset then load_dataset reproduces the items") {
  TempDir dir;
  Rng rng(5);
  LabeledDataset ds;
  ds.class_count = 3;
  for (int i = 0; i < 4; ++i) ds.items.push_back({random_image(3, 3, 3, rng), i % 3});
  const auto manifest = save_dataset(ds, dir.path / "out");
  const auto back = load_dataset(manifest);
  REQUIRE(back.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(back.items[i].image == ds.items[i].image);
    CHECK(back.items[i].label == ds.items[i].label);
  }
}
