#include "docforge/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <png.h>

#include "docforge/core/error.hpp"

namespace docforge {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::ZeroDimension, "negative image dimension");
  }
  pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

void Image::blend(int x, int y, Rgb c, float alpha) noexcept {
  if (x < 0 || y < 0 || x >= width_ || y >= height_ || alpha <= 0.0f) return;
  if (alpha >= 1.0f) {
    set(x, y, c);
    return;
  }
  const std::size_t i = offset(x, y);
  auto mix = [alpha](std::uint8_t dst, std::uint8_t src) {
    return static_cast<std::uint8_t>(std::lround(dst + (static_cast<float>(src) - dst) * alpha));
  };
  pixels_[i] = mix(pixels_[i], c.r);
  pixels_[i + 1] = mix(pixels_[i + 1], c.g);
  pixels_[i + 2] = mix(pixels_[i + 2], c.b);
}

void Image::fill_rect(int x, int y, int w, int h, Rgb c) noexcept {
  const int x0 = std::max(0, x);
  const int y0 = std::max(0, y);
  const int x1 = std::min(width_, x + w);
  const int y1 = std::min(height_, y + h);
  for (int yy = y0; yy < y1; ++yy) {
    for (int xx = x0; xx < x1; ++xx) set(xx, yy, c);
  }
}

namespace {

struct Tap {
  int index;
  float weight;
};

using TapTable = std::vector<std::vector<Tap>>;

TapTable area_taps(int in, int out) {
  TapTable table(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    auto& taps = table[static_cast<std::size_t>(o)];
    for (int i = static_cast<int>(std::floor(lo)); i < static_cast<int>(std::ceil(hi)) && i < in; ++i) {
      const double overlap = std::min<double>(hi, i + 1) - std::max<double>(lo, i);
      if (overlap > 1e-12) taps.push_back({i, static_cast<float>(overlap / scale)});
    }
  }
  return table;
}

TapTable bilinear_taps(int in, int out) {
  TapTable table(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    double pos = (o + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(in - 1));
    const int i0 = static_cast<int>(std::floor(pos));
    const int i1 = std::min(i0 + 1, in - 1);
    const auto frac = static_cast<float>(pos - i0);
    auto& taps = table[static_cast<std::size_t>(o)];
    if (i1 == i0 || frac == 0.0f) {
      taps.push_back({i0, 1.0f});
    } else {
      taps.push_back({i0, 1.0f - frac});
      taps.push_back({i1, frac});
    }
  }
  return table;
}

}  // namespace

Image resample(const Image& src, int out_w, int out_h, ResampleFilter filter) {
  if (out_w <= 0 || out_h <= 0 || src.empty()) {
    throw Error(ErrorCode::ZeroDimension, "resample target or source has zero dimension");
  }
  if (out_w == src.width() && out_h == src.height()) return src;

  const TapTable xs = filter == ResampleFilter::area ? area_taps(src.width(), out_w)
                                                     : bilinear_taps(src.width(), out_w);
  const TapTable ys = filter == ResampleFilter::area ? area_taps(src.height(), out_h)
                                                     : bilinear_taps(src.height(), out_h);

  const auto in_bytes = src.bytes();
  const std::size_t in_stride = static_cast<std::size_t>(src.width()) * 3;
  const std::size_t row_len = static_cast<std::size_t>(out_w) * 3;

  // Horizontal pass on demand, one source row at a time; adjacent output rows
  // share boundary source rows, so remember the last one computed.
  std::vector<float> hrow(row_len);
  int cached_row = -1;
  auto horizontal = [&](int sy) -> const std::vector<float>& {
    if (sy == cached_row) return hrow;
    const std::uint8_t* row = in_bytes.data() + static_cast<std::size_t>(sy) * in_stride;
    for (int ox = 0; ox < out_w; ++ox) {
      float r = 0, g = 0, b = 0;
      for (const Tap& t : xs[static_cast<std::size_t>(ox)]) {
        const std::uint8_t* p = row + static_cast<std::size_t>(t.index) * 3;
        r += t.weight * p[0];
        g += t.weight * p[1];
        b += t.weight * p[2];
      }
      hrow[static_cast<std::size_t>(ox) * 3] = r;
      hrow[static_cast<std::size_t>(ox) * 3 + 1] = g;
      hrow[static_cast<std::size_t>(ox) * 3 + 2] = b;
    }
    cached_row = sy;
    return hrow;
  };

  Image out(out_w, out_h);
  auto out_bytes = out.bytes();
  std::vector<float> acc(row_len);
  for (int oy = 0; oy < out_h; ++oy) {
    std::fill(acc.begin(), acc.end(), 0.0f);
    for (const Tap& t : ys[static_cast<std::size_t>(oy)]) {
      const auto& h = horizontal(t.index);
      for (std::size_t i = 0; i < row_len; ++i) acc[i] += t.weight * h[i];
    }
    std::uint8_t* dst = out_bytes.data() + static_cast<std::size_t>(oy) * row_len;
    for (std::size_t i = 0; i < row_len; ++i) {
      dst[i] = static_cast<std::uint8_t>(std::clamp(std::lround(acc[i]), 0L, 255L));
    }
  }
  return out;
}

double mean_luminance(const Image& image) {
  if (image.empty()) return 0.0;
  double sum = 0.0;
  const auto bytes = image.bytes();
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    sum += 0.299 * bytes[i] + 0.587 * bytes[i + 1] + 0.114 * bytes[i + 2];
  }
  return sum / (static_cast<double>(image.width()) * image.height());
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.empty()) throw Error(ErrorCode::ZeroDimension, "cannot encode an empty image");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_RGB;

  // Worst-case bound so the image is compressed only once.
  png_alloc_size_t size = PNG_IMAGE_PNG_SIZE_MAX(png);
  std::vector<std::uint8_t> buffer(size);
  if (!png_image_write_to_memory(&png, buffer.data(), &size, 0, image.bytes().data(), 0, nullptr)) {
    throw Error(ErrorCode::IoFailure, std::string("PNG encode failed: ") + png.message);
  }
  buffer.resize(size);
  return buffer;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::IoFailure, std::string("PNG header: ") + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  if (png.width == 0 || png.height == 0) {
    png_image_free(&png);
    throw Error(ErrorCode::ZeroDimension, "PNG has zero dimension");
  }
  Image out(static_cast<int>(png.width), static_cast<int>(png.height));
  // Background for alpha inputs composites onto white.
  png_color background{255, 255, 255};
  if (!png_image_finish_read(&png, &background, out.bytes().data(), 0, nullptr)) {
    png_image_free(&png);
    throw Error(ErrorCode::IoFailure, std::string("PNG decode: ") + png.message);
  }
  return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

Image read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace docforge
