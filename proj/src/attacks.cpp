#include "sifter/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "sifter/error.hpp"

namespace sifter {

std::string to_string(Corner corner) {
  switch (corner) {
    case Corner::kTopLeft: return "top-left";
    case Corner::kTopRight: return "top-right";
    case Corner::kBottomLeft: return "bottom-left";
    case Corner::kBottomRight: return "bottom-right";
  }
  return "bottom-right";
}

Corner parse_corner(const std::string& text) {
  if (text == "top-left") return Corner::kTopLeft;
  if (text == "top-right") return Corner::kTopRight;
  if (text == "bottom-left") return Corner::kBottomLeft;
  if (text == "bottom-right") return Corner::kBottomRight;
  throw ConfigError("unknown corner '" + text + "'");
}

namespace {

struct Rect {
  int x0, y0, x1, y1;  // half-open
};

Rect place(const PatchTrigger& patch, int width, int height) {
  if (patch.width < 1 || patch.height < 1 || patch.width > width || patch.height > height) {
    throw DimensionError("patch " + std::to_string(patch.width) + "x" +
                         std::to_string(patch.height) + " does not fit a " +
                         std::to_string(width) + "x" + std::to_string(height) + " image");
  }
  const bool right = patch.anchor == Corner::kTopRight || patch.anchor == Corner::kBottomRight;
  const bool bottom = patch.anchor == Corner::kBottomLeft || patch.anchor == Corner::kBottomRight;
  const int x0 = right ? width - patch.width : 0;
  const int y0 = bottom ? height - patch.height : 0;
  return {x0, y0, x0 + patch.width, y0 + patch.height};
}

}  // namespace

std::vector<std::size_t> patch_footprint(const PatchTrigger& patch, int width, int height) {
  const auto r = place(patch, width, height);
  std::vector<std::size_t> out;
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) out.push_back(static_cast<std::size_t>(y) * width + x);
  }
  return out;
}

Image inject_patch(const Image& img, const PatchTrigger& patch) {
  const auto r = place(patch, img.width(), img.height());
  Image out = img;
  for (int c = 0; c < out.channels(); ++c) {
    auto& plane = out.channel(c);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) plane.at(x, y) = patch.value;
    }
  }
  return out;
}

Image inject_blend(const Image& img, const Image& overlay, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("blend alpha must be in [0, 1], got " + std::to_string(alpha));
  }
  if (!img.same_shape(overlay)) {
    throw DimensionError("blend overlay is " + std::to_string(overlay.width()) + "x" +
                         std::to_string(overlay.height()) + "x" +
                         std::to_string(overlay.channels()) + ", image is " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()) + "x" +
                         std::to_string(img.channels()));
  }
  Image out = img;
  for (int c = 0; c < out.channels(); ++c) {
    auto dst = out.channel(c).pixels();
    const auto src = overlay.channel(c).pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double p = dst[i];
      const double mixed = std::round(p + alpha * (static_cast<double>(src[i]) - p));
      dst[i] = static_cast<std::uint8_t>(std::clamp(mixed, 0.0, 255.0));
    }
  }
  return out;
}

Image inject(const Image& img, const TriggerSpec& spec) {
  if (const auto* patch = std::get_if<PatchTrigger>(&spec.kind)) return inject_patch(img, *patch);
  const auto& blend = std::get<BlendTrigger>(spec.kind);
  return inject_blend(img, blend.overlay, blend.alpha);
}

}  // namespace sifter
