#include "docforge/curation/resize.hpp"

#include <algorithm>
#include <cstdint>

#include "docforge/core/error.hpp"

namespace docforge::curation {

namespace {

int scaled(int value, int numerator, int denominator) {
  // round(value * numerator / denominator), halves up, in exact integers
  const auto num = static_cast<std::int64_t>(value) * numerator;
  const auto r = (2 * num + denominator) / (2 * static_cast<std::int64_t>(denominator));
  return static_cast<int>(std::max<std::int64_t>(1, r));
}

}  // namespace

std::string_view to_string(ResizeVariant variant) noexcept {
  return variant == ResizeVariant::v1_fixed_width ? "v1" : "v1.5";
}

ResizeVariant resize_variant_from_string(std::string_view name) {
  if (name == "v1" || name == "v1_fixed_width") return ResizeVariant::v1_fixed_width;
  if (name == "v1.5" || name == "v15" || name == "v15_resolution_aware") return ResizeVariant::v15_resolution_aware;
  throw Error(ErrorCode::InvalidConfig, "unknown resize policy '" + std::string(name) + "'");
}

std::pair<int, int> resized_dimensions(int width, int height, const ResizePolicy& policy) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::ZeroDimension,
                "image is " + std::to_string(width) + "x" + std::to_string(height));
  }
  const int target = policy.target_px;
  if (target <= 0) throw Error(ErrorCode::InvalidConfig, "resize target must be positive");
  if (policy.variant == ResizeVariant::v1_fixed_width) return {target, scaled(height, target, width)};
  if (std::max(width, height) < target) return {width, height};
  if (width >= height) return {target, scaled(height, target, width)};
  return {scaled(width, target, height), target};
}

Image resize_image(const Image& image, const ResizePolicy& policy) {
  const auto [w, h] = resized_dimensions(image.width(), image.height(), policy);
  if (w == image.width() && h == image.height()) return image;
  const bool shrinking = static_cast<std::int64_t>(w) * h < static_cast<std::int64_t>(image.width()) * image.height();
  return resample(image, w, h, shrinking ? ResampleFilter::area : ResampleFilter::bilinear);
}

}  // namespace docforge::curation
