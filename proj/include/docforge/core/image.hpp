#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace docforge {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit interleaved RGB raster, row-major, no padding.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {255, 255, 255});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const noexcept {
    const std::size_t i = offset(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    const std::size_t i = offset(x, y);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  /// Alpha-blends `c` over the pixel; coordinates outside the raster are ignored.
  void blend(int x, int y, Rgb c, float alpha) noexcept;
  void fill_rect(int x, int y, int w, int h, Rgb c) noexcept;

  std::span<std::uint8_t> bytes() noexcept { return pixels_; }
  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Single-channel 8-bit raster; used for glyph coverage masks.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int x, int y) noexcept { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const noexcept { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

enum class ResampleFilter { area, bilinear };

/// Separable resampling to (out_w, out_h). `area` averages every covered
/// source pixel by overlap; `bilinear` samples at pixel centers.
Image resample(const Image& src, int out_w, int out_h, ResampleFilter filter);

/// Rec. 601 luma in [0, 255] averaged over the image.
double mean_luminance(const Image& image);

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> bytes);
void write_png(const Image& image, const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);

}  // namespace docforge
