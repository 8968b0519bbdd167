#include "docforge/synth/text.hpp"

#include <cmath>
#include <cstdio>

#include "docforge/core/error.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/core/unicode.hpp"

namespace docforge::synth {

namespace {

std::string codepoint_label(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

void require_coverage(const Font& font, std::string_view text) {
  if (auto missing = font.first_uncovered(text)) {
    throw Error(ErrorCode::NoGlyphCoverage, font.path() + " has no glyph for " + codepoint_label(*missing));
  }
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::string current;
  for (char32_t cp : unicode::decode_utf8(line)) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      unicode::append_utf8(current, cp);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

}  // namespace

int TextStyle::line_height() const noexcept { return static_cast<int>(std::ceil(size_px * line_spacing - 1e-9)); }

int TextStyle::baseline_offset() const noexcept {
  const double scale = size_px / font->units_per_em();
  const double extent = (font->ascent_units() - font->descent_units()) * scale;
  return static_cast<int>(std::lround((line_height() - extent) / 2.0 + font->ascent_units() * scale));
}

TextLayout layout_text(std::string_view text, const TextStyle& style, int width_px) {
  require_coverage(*style.font, text);
  const double limit = static_cast<double>(width_px) + 1e-9;
  const Font& font = *style.font;
  auto width_of = [&](std::string_view s) { return font.text_width(s, style.size_px); };

  TextLayout layout;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string current;
    for (std::string& word : split_words(text.substr(start, end - start))) {
      if (!current.empty()) {
        const std::string candidate = current + " " + word;
        if (width_of(candidate) <= limit) {
          current = candidate;
          continue;
        }
        layout.lines.push_back(std::move(current));
        current.clear();
      }
      if (width_of(word) <= limit) {
        current = std::move(word);
        continue;
      }
      for (const std::string& cluster : unicode::grapheme_clusters(word)) {
        if (width_of(cluster) > limit) {
          throw Error(ErrorCode::TextTooWide, "cluster '" + cluster + "' is wider than " + std::to_string(width_px) + " px");
        }
        if (!current.empty() && width_of(current + cluster) > limit) {
          layout.lines.push_back(std::move(current));
          current.clear();
        }
        current += cluster;
      }
    }
    layout.lines.push_back(std::move(current));
    start = end + 1;
  }
  layout.height = static_cast<int>(layout.lines.size()) * style.line_height();
  return layout;
}

void draw_text(Image& image, int x, int y, int width_px, const TextLayout& layout, const TextStyle& style,
               TextAlign align) {
  const int lh = style.line_height();
  const int base = style.baseline_offset();
  for (std::size_t i = 0; i < layout.lines.size(); ++i) {
    const std::string& line = layout.lines[i];
    double pen = x;
    if (align == TextAlign::center) pen += std::max(0.0, (width_px - style.font->text_width(line, style.size_px)) / 2.0);
    const int baseline = y + static_cast<int>(i) * lh + base;
    for (char32_t cp : unicode::decode_utf8(line)) {
      style.font->draw_glyph(image, pen, baseline, cp, style.size_px, style.ink);
      pen += style.font->advance(cp, style.size_px);
    }
  }
}

std::vector<std::shared_ptr<const Font>> covering_fonts(const std::vector<std::filesystem::path>& paths,
                                                        std::string_view text) {
  std::vector<std::shared_ptr<const Font>> fonts;
  std::optional<std::string> first_problem;
  for (const auto& path : paths) {
    auto font = Font::load(path);
    if (auto missing = font->first_uncovered(text)) {
      if (!first_problem) first_problem = font->path() + " has no glyph for " + codepoint_label(*missing);
      continue;
    }
    fonts.push_back(std::move(font));
  }
  if (fonts.empty()) {
    throw Error(ErrorCode::NoGlyphCoverage, first_problem.value_or("no fonts configured"));
  }
  return fonts;
}

RenderedText render_text_block(std::string_view text, const RenderSpec& spec, int width_px, std::uint64_t seed) {
  validate(spec);
  if (text.empty()) throw Error(ErrorCode::PreconditionFailed, "text block is empty");
  const int content_width = spec.page_width - 2 * spec.margin_px;
  if (width_px <= 0 || width_px > content_width) {
    throw Error(ErrorCode::PreconditionFailed, "block width " + std::to_string(width_px) +
                                                   " outside the content area (" + std::to_string(content_width) + ")");
  }
  const auto fonts = covering_fonts(spec.font_paths, text);
  Rng rng(seed);
  const auto& font = fonts[rng.below(fonts.size())];
  const int size = static_cast<int>(rng.between(spec.min_pt, spec.max_pt));

  TextStyle style{font, static_cast<double>(size), spec.line_spacing, spec.ink_color};
  TextLayout layout = layout_text(text, style, width_px);
  RenderedText out;
  out.raster = Image(width_px, layout.height, spec.paper_color);
  draw_text(out.raster, 0, 0, width_px, layout, style);
  out.height_px = layout.height;
  out.font_path = font->path();
  out.size_pt = size;
  out.lines = std::move(layout.lines);
  return out;
}

}  // namespace docforge::synth
