#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "docforge/core/image.hpp"

namespace docforge::synth {

/// Immutable TrueType face. Glyph advances come from the font's horizontal
/// metrics except for nonspacing marks (Mn/Me), which always advance 0 so
/// Thai above/below-base vowels and tone marks sit on their base glyph.
/// Thread-safe after load.
class Font {
 public:
  /// Loads through a process-wide cache keyed by the normalized path.
  /// Throws IoFailure or InvalidSpec (not a usable font file).
  static std::shared_ptr<const Font> load(const std::filesystem::path& path);

  ~Font();
  Font(const Font&) = delete;
  Font& operator=(const Font&) = delete;

  const std::string& path() const noexcept;

  /// Whitespace counts as covered.
  bool covers(char32_t cp) const noexcept;
  std::optional<char32_t> first_uncovered(std::string_view text) const;

  int units_per_em() const noexcept;
  int ascent_units() const noexcept;
  int descent_units() const noexcept;  // negative below the baseline
  int advance_units(char32_t cp) const noexcept;

  double advance(char32_t cp, double size_px) const noexcept;
  double text_width(std::string_view text, double size_px) const;

  /// Draws one codepoint with its origin at (x, baseline), blending `ink`
  /// by glyph coverage. Pixels outside the image are clipped.
  void draw_glyph(Image& image, double x, int baseline, char32_t cp, double size_px, Rgb ink) const;

 private:
  struct Impl;
  explicit Font(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace docforge::synth
