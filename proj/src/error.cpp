#include "sifter/error.hpp"

namespace sifter {

const char* to_string(ImageErrorKind kind) noexcept {
  switch (kind) {
    case ImageErrorKind::kUnsupportedFormat:
      return "unsupported format";
    case ImageErrorKind::kUnsupportedDepth:
      return "unsupported depth";
    case ImageErrorKind::kMalformedHeader:
      return "malformed header";
    case ImageErrorKind::kTruncatedPayload:
      return "truncated payload";
  }
  return "image error";
}

namespace {
std::string describe(ImageErrorKind kind, const std::string& what,
                     std::optional<std::uint64_t> offset) {
  std::string msg = std::string(to_string(kind)) + ": " + what;
  if (offset) msg += " (at byte " + std::to_string(*offset) + ")";
  return msg;
}
}  // namespace

ImageFormatError::ImageFormatError(ImageErrorKind kind, const std::string& what,
                                   std::optional<std::uint64_t> offset)
    : DataError(describe(kind, what, offset)), kind_(kind), offset_(offset) {}

}  // namespace sifter
