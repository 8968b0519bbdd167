#pragma once

#include <string>
#include <vector>

#include "docforge/core/image.hpp"
#include "docforge/docmodel/document.hpp"
#include "docforge/synth/layout.hpp"
#include "docforge/synth/render_spec.hpp"

namespace docforge::synth {

struct RasterizedPage {
  Image image;
  docmodel::DocumentTree tree;
};

/// Draws every planned block into a page of the plan's size and returns it
/// with the tree of exactly those blocks in plan order. When `log` is given,
/// each string handed to a drawing routine is appended as "<role>:<text>"
/// (text, cell, figure, equation).
RasterizedPage rasterize_page(const PagePlan& plan, const RenderSpec& render,
                              std::vector<std::string>* log = nullptr);

}  // namespace docforge::synth
