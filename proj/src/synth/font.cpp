#include "docforge/synth/font.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "stb_truetype.h"

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/unicode.hpp"

namespace docforge::synth {

struct Font::Impl {
  std::string path;
  std::vector<std::uint8_t> data;
  stbtt_fontinfo info{};
  int units_per_em = 1000;
  int ascent = 0;
  int descent = 0;
  int space_advance = 0;
};

namespace {

struct GlyphKey {
  const void* font;
  int glyph;
  int size_64;   // size in 1/64 px
  int shift_4;   // horizontal subpixel offset in quarters
  bool operator==(const GlyphKey&) const = default;
};

struct GlyphKeyHash {
  std::size_t operator()(const GlyphKey& k) const noexcept {
    std::size_t h = std::hash<const void*>()(k.font);
    h ^= static_cast<std::size_t>(k.glyph) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::size_t>(k.size_64) * 0xC2B2AE3D27D4EB4FULL + (h << 6);
    h ^= static_cast<std::size_t>(k.shift_4) + (h >> 2);
    return h;
  }
};

struct GlyphBitmap {
  GrayImage mask;
  int x_off = 0;
  int y_off = 0;
};

constexpr std::size_t kGlyphCacheLimit = 50000;

}  // namespace

Font::Font(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Font::~Font() = default;

std::shared_ptr<const Font> Font::load(const std::filesystem::path& path) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const Font>> cache;

  std::error_code ec;
  const std::filesystem::path canonical = std::filesystem::weakly_canonical(path, ec);
  const std::string key = (ec ? path : canonical).string();
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  auto impl = std::make_unique<Impl>();
  impl->path = path.string();
  impl->data = read_binary_file(path);
  const int offset = stbtt_GetFontOffsetForIndex(impl->data.data(), 0);
  if (offset < 0 || stbtt_InitFont(&impl->info, impl->data.data(), offset) == 0) {
    throw Error(ErrorCode::InvalidSpec, "not a usable TrueType font: " + path.string());
  }
  const float em_scale = stbtt_ScaleForMappingEmToPixels(&impl->info, 1.0f);
  impl->units_per_em = em_scale > 0 ? static_cast<int>(std::lround(1.0 / em_scale)) : 1000;
  int line_gap = 0;
  stbtt_GetFontVMetrics(&impl->info, &impl->ascent, &impl->descent, &line_gap);
  if (stbtt_FindGlyphIndex(&impl->info, ' ') != 0) {
    int lsb = 0;
    stbtt_GetCodepointHMetrics(&impl->info, ' ', &impl->space_advance, &lsb);
  } else {
    impl->space_advance = impl->units_per_em / 4;
  }

  std::shared_ptr<const Font> font(new Font(std::move(impl)));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(font)).first->second;
}

const std::string& Font::path() const noexcept { return impl_->path; }

bool Font::covers(char32_t cp) const noexcept {
  if (unicode::is_whitespace(cp)) return true;
  return stbtt_FindGlyphIndex(&impl_->info, static_cast<int>(cp)) != 0;
}

std::optional<char32_t> Font::first_uncovered(std::string_view text) const {
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (!covers(cp)) return cp;
  }
  return std::nullopt;
}

int Font::units_per_em() const noexcept { return impl_->units_per_em; }
int Font::ascent_units() const noexcept { return impl_->ascent; }
int Font::descent_units() const noexcept { return impl_->descent; }

int Font::advance_units(char32_t cp) const noexcept {
  if (unicode::is_nonspacing_mark(cp)) return 0;
  if (unicode::is_whitespace(cp)) return impl_->space_advance;
  int advance = 0;
  int lsb = 0;
  stbtt_GetCodepointHMetrics(&impl_->info, static_cast<int>(cp), &advance, &lsb);
  return advance;
}

double Font::advance(char32_t cp, double size_px) const noexcept {
  return advance_units(cp) * size_px / impl_->units_per_em;
}

double Font::text_width(std::string_view text, double size_px) const {
  long units = 0;
  for (char32_t cp : unicode::decode_utf8(text)) units += advance_units(cp);
  return static_cast<double>(units) * size_px / impl_->units_per_em;
}

void Font::draw_glyph(Image& image, double x, int baseline, char32_t cp, double size_px, Rgb ink) const {
  if (unicode::is_whitespace(cp)) return;
  const int glyph = stbtt_FindGlyphIndex(&impl_->info, static_cast<int>(cp));
  if (glyph == 0) return;

  const int x_int = static_cast<int>(std::floor(x));
  const int shift_4 = static_cast<int>(std::floor((x - x_int) * 4.0));
  const GlyphKey key{impl_.get(), glyph, static_cast<int>(std::lround(size_px * 64.0)), shift_4};

  thread_local std::unordered_map<GlyphKey, GlyphBitmap, GlyphKeyHash> cache;
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > kGlyphCacheLimit) cache.clear();
    const float scale = static_cast<float>(key.size_64 / 64.0 / impl_->units_per_em);
    const float shift = static_cast<float>(shift_4 / 4.0);
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    stbtt_GetGlyphBitmapBoxSubpixel(&impl_->info, glyph, scale, scale, shift, 0.0f, &x0, &y0, &x1, &y1);
    GlyphBitmap bitmap;
    bitmap.x_off = x0;
    bitmap.y_off = y0;
    if (x1 > x0 && y1 > y0) {
      bitmap.mask = GrayImage(x1 - x0, y1 - y0);
      stbtt_MakeGlyphBitmapSubpixel(&impl_->info, bitmap.mask.pixels.data(), bitmap.mask.width, bitmap.mask.height,
                                    bitmap.mask.width, scale, scale, shift, 0.0f, glyph);
    }
    it = cache.emplace(key, std::move(bitmap)).first;
  }

  const GlyphBitmap& g = it->second;
  for (int gy = 0; gy < g.mask.height; ++gy) {
    const int py = baseline + g.y_off + gy;
    if (py < 0 || py >= image.height()) continue;
    for (int gx = 0; gx < g.mask.width; ++gx) {
      const std::uint8_t coverage = g.mask.at(gx, gy);
      if (coverage == 0) continue;
      image.blend(x_int + g.x_off + gx, py, ink, coverage / 255.0f);
    }
  }
}

}  // namespace docforge::synth
