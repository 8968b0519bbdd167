#pragma once

#include <filesystem>
#include <vector>

#include "docforge/core/image.hpp"

namespace docforge::synth {

/// Page and typography parameters. One pixel per point: a 14 pt face is
/// rendered with a 14 px em.
struct RenderSpec {
  std::vector<std::filesystem::path> font_paths;              // body text
  std::vector<std::filesystem::path> heading_font_paths;      // empty: body fonts
  std::vector<std::filesystem::path> handwriting_font_paths;  // optional slot
  std::filesystem::path equation_font_path;                   // empty: body fonts
  double handwriting_fraction = 0.0;  // share of paragraphs set in a handwriting face
  int min_pt = 14;
  int max_pt = 22;
  int page_width = 1240;
  int page_height = 1754;
  int margin_px = 90;
  double line_spacing = 1.5;
  Rgb ink_color{20, 20, 20};
  Rgb paper_color{252, 250, 245};
};

/// Throws InvalidSpec: no body font, min_pt < 8 or max_pt < min_pt, page
/// side outside [600, 4200], margins that leave no content area, line
/// spacing below 1, handwriting fraction outside [0, 1].
void validate(const RenderSpec& spec);

}  // namespace docforge::synth
