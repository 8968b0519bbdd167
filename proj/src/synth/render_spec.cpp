#include "docforge/synth/render_spec.hpp"

#include <string>

#include "docforge/core/error.hpp"

namespace docforge::synth {

void validate(const RenderSpec& spec) {
  auto fail = [](const std::string& message) { throw Error(ErrorCode::InvalidSpec, message); };
  if (spec.font_paths.empty()) fail("render spec names no body font");
  if (spec.min_pt < 8) fail("min_pt must be at least 8");
  if (spec.max_pt < spec.min_pt) fail("max_pt below min_pt");
  for (int side : {spec.page_width, spec.page_height}) {
    if (side < 600 || side > 4200) fail("page side " + std::to_string(side) + " outside [600, 4200]");
  }
  if (spec.margin_px < 0 || 2 * spec.margin_px >= spec.page_width || 2 * spec.margin_px >= spec.page_height) {
    fail("margins leave no content area");
  }
  if (!(spec.line_spacing >= 1.0)) fail("line spacing below 1");
  if (!(spec.handwriting_fraction >= 0.0 && spec.handwriting_fraction <= 1.0)) {
    fail("handwriting fraction outside [0, 1]");
  }
  if (spec.handwriting_fraction > 0.0 && spec.handwriting_font_paths.empty()) {
    fail("handwriting fraction set without handwriting fonts");
  }
}

}  // namespace docforge::synth
