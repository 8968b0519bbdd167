#include "docforge/synth/raster.hpp"

#include <cmath>

#include "docforge/core/error.hpp"

namespace docforge::synth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void draw_rect_outline(Image& image, const Box& box, Rgb color) {
  image.fill_rect(box.x, box.y, box.width, 1, color);
  image.fill_rect(box.x, box.bottom() - 1, box.width, 1, color);
  image.fill_rect(box.x, box.y, 1, box.height, color);
  image.fill_rect(box.right() - 1, box.y, 1, box.height, color);
}

void draw_bullet(Image& image, int cx, int cy, double radius, Rgb ink) {
  const int r = static_cast<int>(std::ceil(radius)) + 1;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double d = std::sqrt(static_cast<double>(dx * dx + dy * dy));
      const double alpha = std::clamp(radius + 0.5 - d, 0.0, 1.0);
      if (alpha > 0.0) image.blend(cx + dx, cy + dy, ink, static_cast<float>(alpha));
    }
  }
}

void note(std::vector<std::string>* log, const char* role, const std::string& text) {
  if (log != nullptr) log->push_back(std::string(role) + ":" + text);
}

}  // namespace

RasterizedPage rasterize_page(const PagePlan& plan, const RenderSpec& render, std::vector<std::string>* log) {
  Image page(plan.page_width, plan.page_height, render.paper_color);
  std::vector<docmodel::ContentBlock> blocks;
  blocks.reserve(plan.blocks.size());

  for (const PlacedBlock& placed : plan.blocks) {
    const Box& box = placed.box;
    auto text_style = [&] {
      return TextStyle{Font::load(placed.style.font_path), placed.style.size_px, placed.style.line_spacing,
                       render.ink_color};
    };
    auto draw_block_text = [&](const std::string& text, TextAlign align) {
      const TextStyle style = text_style();
      const TextLayout layout = layout_text(text, style, box.width);
      draw_text(page, box.x, box.y, box.width, layout, style, align);
      note(log, "text", text);
      return style;
    };

    std::visit(overloaded{
                   [&](const docmodel::Heading& h) { draw_block_text(h.text, TextAlign::left); },
                   [&](const docmodel::Paragraph& p) { draw_block_text(p.text, TextAlign::left); },
                   [&](const docmodel::ListItem& li) {
                     const TextStyle style = draw_block_text(li.text, TextAlign::left);
                     const int cx = box.x - static_cast<int>(std::lround(style.size_px * 0.6));
                     const int cy = box.y + style.line_height() / 2;
                     draw_bullet(page, cx, cy, style.size_px * 0.16, render.ink_color);
                   },
                   [&](const docmodel::Equation& e) {
                     const TextStyle style = text_style();
                     const TextLayout layout = layout_text(e.source, style, box.width);
                     draw_text(page, box.x, box.y, box.width, layout, style, TextAlign::center);
                     note(log, "equation", e.source);
                   },
                   [&](const docmodel::Table& t) {
                     const TextStyle style = text_style();
                     const TableGeometry geo = measure_table(t, style, box.width);
                     for (const auto& cell : geo.cells) {
                       const Box cell_box{box.x + cell.box.x, box.y + cell.box.y, cell.box.width, cell.box.height};
                       draw_rect_outline(page, cell_box, render.ink_color);
                       draw_text(page, cell_box.x + 1 + geo.padding, cell_box.y + 1 + geo.padding,
                                 cell_box.width - 2 * geo.padding - 1, cell.layout, style);
                       note(log, "cell", cell.text);
                     }
                   },
                   [&](const docmodel::Figure& f) {
                     if (!placed.raster) throw Error(ErrorCode::PreconditionFailed, "figure without raster");
                     const Image scaled = resample(*placed.raster, box.width, box.height,
                                                   box.width < placed.raster->width() ? ResampleFilter::area
                                                                                      : ResampleFilter::bilinear);
                     for (int y = 0; y < box.height; ++y) {
                       for (int x = 0; x < box.width; ++x) page.set(box.x + x, box.y + y, scaled.at(x, y));
                     }
                     note(log, "figure", f.description);
                   },
               },
               placed.block);
    blocks.push_back(placed.block);
  }
  return {std::move(page), docmodel::build_tree(std::move(blocks), plan.language)};
}

}  // namespace docforge::synth
