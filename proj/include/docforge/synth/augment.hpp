#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "docforge/core/image.hpp"

namespace docforge::synth {

struct GaussianBlur {
  double sigma = 1.0;  // [0.3, 1.5] px
};
struct AdditiveNoise {
  double sigma = 6.0;  // [2, 12] on the 0-255 scale
};
/// Stand-in for codec blocking: luma is pulled toward its 8x8 block mean by
/// strength / 8.
struct BlockQuantization {
  double strength = 2.0;  // [1, 4]
};
/// Multiplies pixels by 1 - amplitude * g, where g runs 0..1 along a random
/// direction across the page.
struct IlluminationGradient {
  double amplitude = 0.15;  // [0.05, 0.3]
};
/// Homography moving each page corner by up to max_shift_pct percent of the
/// width (x) and height (y); exposed areas take the paper color.
struct PerspectiveWarp {
  double max_shift_pct = 1.0;  // [0, 2]
};
/// Sets rate_pct percent of pixels to black or white (even odds).
struct SaltPepper {
  double rate_pct = 0.2;  // [0, 0.5]
};

using AugOp = std::variant<GaussianBlur, AdditiveNoise, BlockQuantization, IlluminationGradient, PerspectiveWarp,
                           SaltPepper>;

inline constexpr std::size_t kAugOpKinds = std::variant_size_v<AugOp>;

std::string_view op_name(const AugOp& op) noexcept;
std::string_view op_name(std::size_t kind) noexcept;

struct AugmentationSpec {
  std::vector<AugOp> ops;  // applied in order, at most 4
};

/// Throws InvalidSpec for more than 4 ops or a parameter outside its range.
void validate(const AugmentationSpec& spec);

/// Applies the ops in order; op i draws from its own stream derived from
/// (seed, i). Output has the input's dimensions; no ops returns an identical
/// copy.
Image augment(const Image& image, const AugmentationSpec& spec, std::uint64_t seed, Rgb paper = {255, 255, 255});

/// Float plane helpers, exposed for testing.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float& at(int x, int y) noexcept { return values[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const noexcept { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Normalized separable Gaussian, radius ceil(3 sigma), replicated borders.
Plane gaussian_blur(const Plane& plane, double sigma);

/// Destination corners (top-left, top-right, bottom-right, bottom-left) the
/// warp with this op index and seed maps the page corners to.
std::array<std::array<double, 2>, 4> warp_corners(const PerspectiveWarp& op, int width, int height,
                                                  std::uint64_t seed, std::size_t op_index);

/// Parameter ranges a generator samples from; each must lie inside the
/// op's valid range. `enabled` lists kinds by variant index.
struct AugmentationPolicy {
  double fraction = 1.0;  // share of samples augmented
  std::size_t max_ops = 4;
  std::vector<std::size_t> enabled{0, 1, 2, 3, 4, 5};
  std::array<std::array<double, 2>, kAugOpKinds> ranges{{{0.3, 1.5}, {2.0, 12.0}, {1.0, 4.0}, {0.05, 0.3},
                                                         {0.0, 2.0}, {0.0, 0.5}}};
};

/// Throws InvalidSpec when a range leaves the valid interval, max_ops is
/// outside [1, 4], or fraction is outside [0, 1].
void validate(const AugmentationPolicy& policy);

/// With probability `fraction`, between 1 and min(max_ops, enabled) distinct
/// ops in the fixed pipeline order warp, illumination, blur, noise,
/// salt-and-pepper, quantization; otherwise an empty spec.
AugmentationSpec sample_augmentation(const AugmentationPolicy& policy, std::uint64_t seed);

}  // namespace docforge::synth
