#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sifter {

/// Root of every error thrown by the library. The category decides the CLI
/// exit status, so keep new error types under one of the two branches.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or length disagreement between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a scalar argument or a configuration value failed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data is missing, malformed, or does not cover what it must.
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public DataError {
 public:
  IoError(const std::string& path, const std::string& what)
      : DataError(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class ImageErrorKind {
  kUnsupportedFormat,
  kUnsupportedDepth,
  kMalformedHeader,
  kTruncatedPayload,
};

const char* to_string(ImageErrorKind kind) noexcept;

class ImageFormatError : public DataError {
 public:
  ImageFormatError(ImageErrorKind kind, const std::string& what,
                   std::optional<std::uint64_t> offset = std::nullopt);

  ImageErrorKind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> offset() const noexcept { return offset_; }

 private:
  ImageErrorKind kind_;
  std::optional<std::uint64_t> offset_;
};

}  // namespace sifter
