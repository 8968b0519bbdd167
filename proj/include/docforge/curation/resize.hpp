#pragma once

#include <string_view>
#include <utility>

#include "docforge/core/image.hpp"

namespace docforge::curation {

enum class ResizeVariant { v1_fixed_width, v15_resolution_aware };

std::string_view to_string(ResizeVariant variant) noexcept;
ResizeVariant resize_variant_from_string(std::string_view name);

struct ResizePolicy {
  ResizeVariant variant = ResizeVariant::v15_resolution_aware;
  int target_px = 1800;
};

/// Output size for a (width, height) input; heights/widths derived from the
/// aspect ratio are rounded to nearest (halves up), never below 1.
///   v1_fixed_width:       width = target.
///   v15_resolution_aware: unchanged if max(w, h) < target, else
///                         max(w, h) = target.
/// Throws ZeroDimension for non-positive input, InvalidConfig for target <= 0.
std::pair<int, int> resized_dimensions(int width, int height, const ResizePolicy& policy);

/// Area averaging when shrinking, bilinear when enlarging; an unchanged size
/// returns a copy of the input.
Image resize_image(const Image& image, const ResizePolicy& policy);

}  // namespace docforge::curation
