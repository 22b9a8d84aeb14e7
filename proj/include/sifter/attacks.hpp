#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "sifter/image.hpp"

namespace sifter {

enum class Corner { kTopLeft, kTopRight, kBottomLeft, kBottomRight };

std::string to_string(Corner corner);
Corner parse_corner(const std::string& text);

/// Solid rectangle anchored at an image corner (BadNet style).
struct PatchTrigger {
  int width = 3;
  int height = 3;
  std::uint8_t value = 255;
  Corner anchor = Corner::kBottomRight;
};

/// Whole-image overlay mixed in at `alpha` (Blended style).
struct BlendTrigger {
  Image overlay;
  double alpha = 0.065;
};

struct TriggerSpec {
  std::variant<PatchTrigger, BlendTrigger> kind = PatchTrigger{};
  int target_label = 0;
};

/// Overwrites the anchored rectangle with the patch value on every channel.
Image inject_patch(const Image& img, const PatchTrigger& patch);

/// round((1 - alpha) * pixel + alpha * overlay), halves rounded away from
/// zero. Computed as pixel + alpha * (overlay - pixel), which is the same
/// quantity and stays monotone in alpha under floating point.
Image inject_blend(const Image& img, const Image& overlay, double alpha);

Image inject(const Image& img, const TriggerSpec& spec);

/// Pixels covered by a patch trigger on a width x height image, row-major
/// indices, in scan order. Throws if the patch does not fit.
std::vector<std::size_t> patch_footprint(const PatchTrigger& patch, int width, int height);

}  // namespace sifter
