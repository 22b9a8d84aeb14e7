#pragma once

// Little-endian scalar encode/decode used by the binary containers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sifter/error.hpp"

namespace sifter::detail {

class ByteWriter {
 public:
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void bytes(std::span<const std::uint8_t> s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

  template <typename T>
  void le(T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      buf_.push_back(static_cast<std::uint8_t>(u & 0xFF));
      u = static_cast<U>(u >> 8);
    }
  }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void i64(std::int64_t v) { le(v); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t>& buffer() noexcept { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::span<const std::uint8_t> take(std::size_t count) {
    if (count > data_.size() - pos_) {
      throw DataError(what_ + ": truncated at byte " + std::to_string(pos_) + " (need " +
                      std::to_string(count) + " more bytes)");
    }
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

  template <typename T>
  T le() {
    auto raw = take(sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t b = sizeof(T); b-- > 0;) u = static_cast<decltype(u)>((u << 8) | raw[b]);
    return static_cast<T>(u);
  }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  std::int64_t i64() { return le<std::int64_t>(); }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }

  std::size_t position() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == data_.size(); }
  const std::string& what() const noexcept { return what_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::string what_;
};

}  // namespace sifter::detail
