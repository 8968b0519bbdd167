#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "docforge/core/image.hpp"
#include "docforge/synth/font.hpp"
#include "docforge/synth/render_spec.hpp"

namespace docforge::synth {

struct TextStyle {
  std::shared_ptr<const Font> font;
  double size_px = 14.0;
  double line_spacing = 1.5;
  Rgb ink{20, 20, 20};

  /// ceil(size * spacing)
  int line_height() const noexcept;
  /// Baseline offset from the top of a line box; the face's ascent-descent
  /// extent is centered in the box.
  int baseline_offset() const noexcept;
};

struct TextLayout {
  std::vector<std::string> lines;
  int height = 0;  // lines * line_height
};

/// Greedy wrap: words (whitespace-separated) are packed onto lines joined by
/// one space; a word wider than `width_px` is broken between grapheme
/// clusters. '\n' forces a break. Throws TextTooWide when one cluster alone
/// exceeds the width, NoGlyphCoverage when the face lacks a codepoint.
TextLayout layout_text(std::string_view text, const TextStyle& style, int width_px);

enum class TextAlign { left, center };

/// Draws a layout with its first line box at (x, y) inside a `width_px` column.
void draw_text(Image& image, int x, int y, int width_px, const TextLayout& layout, const TextStyle& style,
               TextAlign align = TextAlign::left);

/// Fonts among `paths` that cover every codepoint of `text`.
/// Throws NoGlyphCoverage naming the first missing codepoint when none does.
std::vector<std::shared_ptr<const Font>> covering_fonts(const std::vector<std::filesystem::path>& paths,
                                                        std::string_view text);

struct RenderedText {
  Image raster;  // width_px x height_px, paper background
  int height_px = 0;
  std::string font_path;
  int size_pt = 0;
  std::vector<std::string> lines;
};

/// Picks a covering body font and a size in [min_pt, max_pt] from Rng(seed),
/// wraps and draws. Requires non-empty text and 0 < width_px <= the page's
/// content width (PreconditionFailed otherwise).
RenderedText render_text_block(std::string_view text, const RenderSpec& spec, int width_px, std::uint64_t seed);

}  // namespace docforge::synth
