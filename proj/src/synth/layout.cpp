#include "docforge/synth/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "docforge/core/error.hpp"
#include "docforge/core/rng.hpp"

namespace docforge::synth {

namespace {

using docmodel::BlockKind;

constexpr std::array<double, 6> kHeadingScale{1.8, 1.5, 1.25, 1.1, 1.0, 1.0};

std::string capitalize_sentence(std::string text, bool period) {
  if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') text[0] = static_cast<char>(text[0] - 'a' + 'A');
  if (period) text += ".";
  return text;
}

class Composer {
 public:
  Composer(const LayoutSpec& layout, const Lexicon& lexicon, const AssetPool& pool, const RenderSpec& render,
           std::uint64_t seed)
      : layout_(layout), lexicon_(lexicon), pool_(pool), render_(render), rng_(seed) {}

  PagePlan run() {
    PagePlan plan;
    plan.page_width = render_.page_width;
    plan.page_height = render_.page_height;
    plan.margin_px = render_.margin_px;
    plan.columns = layout_.columns;
    plan.column_gap_px = layout_.columns > 1 ? layout_.column_gap_px : 0;
    plan.language = lexicon_.script_tag == ScriptTag::thai    ? docmodel::Language::thai
                    : lexicon_.script_tag == ScriptTag::latin ? docmodel::Language::english
                                                              : docmodel::Language::mixed;

    top_ = render_.margin_px;
    bottom_ = render_.page_height - render_.margin_px;
    const int content_w = render_.page_width - 2 * render_.margin_px;
    col_w_ = (content_w - plan.column_gap_px * (layout_.columns - 1)) / layout_.columns;
    if (col_w_ < 60) throw Error(ErrorCode::InvalidSpec, "columns narrower than 60 px");
    gap_ = plan.column_gap_px;

    for (const auto& path : render_.font_paths) body_fonts_.push_back(Font::load(path));
    page_font_ = rng_.below(body_fonts_.size());
    size_ = static_cast<double>(rng_.between(render_.min_pt, render_.max_pt));
    block_gap_ = static_cast<int>(std::lround(size_ * 0.8));
    y_ = top_;

    const auto n_blocks = rng_.between(layout_.blocks_per_page.lo, layout_.blocks_per_page.hi);
    for (std::int64_t i = 0; i < n_blocks; ++i) {
      switch (static_cast<BlockKind>(rng_.weighted_index(layout_.block_mix))) {
        case BlockKind::heading: add_heading(plan); break;
        case BlockKind::paragraph: add_paragraph(plan); break;
        case BlockKind::table: add_table(plan); break;
        case BlockKind::figure: add_figure(plan); break;
        case BlockKind::equation: add_equation(plan); break;
        case BlockKind::list_item: add_list(plan); break;
      }
    }
    if (plan.blocks.empty()) {
      throw Error(ErrorCode::LayoutInfeasible, "no sampled block fits an empty page");
    }
    return plan;
  }

 private:
  int between(const IntRange& r) { return static_cast<int>(rng_.between(r.lo, r.hi)); }

  std::string words_text(const IntRange& range, bool sentence) {
    const auto words = sample_vocab(lexicon_, static_cast<std::size_t>(between(range)), rng_.next());
    std::string out;
    if (lexicon_.script_tag == ScriptTag::thai) {
      // Thai has no spaces between words; runs of 2-5 words form a phrase.
      for (std::size_t i = 0; i < words.size();) {
        const auto run = static_cast<std::size_t>(rng_.between(2, 5));
        if (!out.empty()) out += ' ';
        for (std::size_t k = 0; k < run && i < words.size(); ++k, ++i) out += words[i];
      }
      return out;
    }
    for (const auto& w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return capitalize_sentence(std::move(out), sentence);
  }

  std::string numeric_text() {
    char buf[32];
    switch (rng_.below(3)) {
      case 0: {
        const auto v = rng_.between(0, 99999);
        if (v >= 1000) {
          std::snprintf(buf, sizeof buf, "%lld,%03lld", static_cast<long long>(v / 1000),
                        static_cast<long long>(v % 1000));
        } else {
          std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        }
        break;
      }
      case 1: std::snprintf(buf, sizeof buf, "%.1f", static_cast<double>(rng_.between(0, 9999)) / 10.0); break;
      default: std::snprintf(buf, sizeof buf, "%lld%%", static_cast<long long>(rng_.between(0, 100))); break;
    }
    return buf;
  }

  /// First font of `preferred` (starting at `start`) covering `text`, else a
  /// covering body font.
  std::shared_ptr<const Font> pick_font(const std::vector<std::filesystem::path>& preferred, std::size_t start,
                                        const std::string& text) {
    for (std::size_t k = 0; k < preferred.size(); ++k) {
      auto font = Font::load(preferred[(start + k) % preferred.size()]);
      if (!font->first_uncovered(text)) return font;
    }
    for (std::size_t k = 0; k < body_fonts_.size(); ++k) {
      const auto& font = body_fonts_[(page_font_ + k) % body_fonts_.size()];
      if (!font->first_uncovered(text)) return font;
    }
    return covering_fonts(render_.font_paths, text).front();  // throws NoGlyphCoverage
  }

  TextStyle style_for(std::shared_ptr<const Font> font, double size, double spacing) const {
    return TextStyle{std::move(font), size, spacing, render_.ink_color};
  }

  int column_x(int column) const { return render_.margin_px + column * (col_w_ + gap_); }

  bool place(PagePlan& plan, PlacedBlock block, int x_offset, int width, int height) {
    const int content_h = bottom_ - top_;
    if (height <= 0 || height > content_h) return false;
    if (y_ + height > bottom_) {
      if (column_ + 1 >= layout_.columns) return false;
      ++column_;
      y_ = top_;
    }
    block.column = column_;
    block.box = Box{column_x(column_) + x_offset, y_, width, height};
    plan.blocks.push_back(std::move(block));
    y_ += height + block_gap_;
    return true;
  }

  void add_text_block(PagePlan& plan, docmodel::ContentBlock content, const std::string& text, BlockStyle style,
                      const std::shared_ptr<const Font>& font) {
    style.font_path = font->path();
    const int width = col_w_ - style.indent_px;
    std::optional<TextLayout> text_layout;
    try {
      text_layout = layout_text(text, style_for(font, style.size_px, style.line_spacing), width);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TextTooWide) throw;
      return;
    }
    const int indent = style.indent_px;
    PlacedBlock block{std::move(content), {}, 0, std::move(style), nullptr};
    place(plan, std::move(block), indent, width, text_layout->height);
  }

  void add_heading(PagePlan& plan) {
    const int level = static_cast<int>(rng_.between(1, 3));
    std::string text = words_text(layout_.heading_words, false);
    auto font = pick_font(render_.heading_font_paths, page_font_, text);
    BlockStyle style;
    style.role = BlockRole::heading;
    style.size_px = std::round(size_ * kHeadingScale[static_cast<std::size_t>(level - 1)]);
    style.line_spacing = render_.line_spacing;
    add_text_block(plan, docmodel::Heading{level, text}, text, style, font);
  }

  void add_paragraph(PagePlan& plan) {
    std::string text = words_text(layout_.paragraph_words, true);
    const bool handwriting = render_.handwriting_fraction > 0.0 && rng_.bernoulli(render_.handwriting_fraction);
    BlockStyle style;
    style.line_spacing = render_.line_spacing;
    std::shared_ptr<const Font> font;
    if (handwriting) {
      font = pick_font(render_.handwriting_font_paths, rng_.below(render_.handwriting_font_paths.size()), text);
      style.role = BlockRole::handwriting;
      style.size_px = std::round(size_ * 1.15);
    } else {
      font = pick_font({}, 0, text);
      style.role = BlockRole::body;
      style.size_px = size_;
    }
    add_text_block(plan, docmodel::Paragraph{text}, text, style, font);
  }

  void add_list(PagePlan& plan) {
    const int items = between(layout_.list_items);
    for (int j = 0; j < items; ++j) {
      const int depth = j == 0 ? 0 : static_cast<int>(rng_.between(0, 1));
      std::string text = words_text(layout_.list_item_words, false);
      auto font = pick_font({}, 0, text);
      BlockStyle style;
      style.role = BlockRole::list_item;
      style.size_px = size_;
      style.line_spacing = render_.line_spacing;
      style.indent_px = static_cast<int>(std::lround(size_ * (1.2 + 1.5 * depth)));
      add_text_block(plan, docmodel::ListItem{depth, text}, text, style, font);
    }
  }

  void add_table(PagePlan& plan) {
    const int rows = between(layout_.table_rows);
    const int cols = between(layout_.table_cols);
    const bool header_span = cols >= 3 && rng_.bernoulli(layout_.span_probability);
    const int span_at = header_span ? static_cast<int>(rng_.between(0, cols - 2)) : -1;
    const bool first_col_span = rows >= 3 && rng_.bernoulli(layout_.span_probability);

    docmodel::Table table;
    std::vector<docmodel::TableCell> header;
    for (int c = 0; c < cols; ++c) {
      docmodel::TableCell cell{words_text(layout_.cell_words, false), 1, 1};
      if (c == span_at) {
        cell.colspan = 2;
        ++c;
      }
      header.push_back(std::move(cell));
    }
    table.rows.push_back(std::move(header));
    for (int r = 1; r < rows; ++r) {
      std::vector<docmodel::TableCell> row;
      for (int c = 0; c < cols; ++c) {
        if (first_col_span && r == 2 && c == 0) continue;
        const bool numeric = c > 0 && rng_.bernoulli(layout_.numeric_cell_probability);
        docmodel::TableCell cell{numeric ? numeric_text() : words_text(layout_.cell_words, false), 1, 1};
        if (first_col_span && r == 1 && c == 0) cell.rowspan = 2;
        row.push_back(std::move(cell));
      }
      table.rows.push_back(std::move(row));
    }

    std::string all_text;
    for (const auto& row : table.rows) {
      for (const auto& cell : row) all_text += cell.text;
    }
    auto font = pick_font({}, 0, all_text);
    BlockStyle style;
    style.role = BlockRole::table;
    style.font_path = font->path();
    style.size_px = std::round(size_ * 0.9);
    style.line_spacing = 1.3;
    TableGeometry geometry;
    try {
      geometry = measure_table(table, style_for(font, style.size_px, style.line_spacing), col_w_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TextTooWide) throw;
      return;
    }
    PlacedBlock block{std::move(table), {}, 0, std::move(style), nullptr};
    place(plan, std::move(block), 0, geometry.width, geometry.height);
  }

  void add_figure(PagePlan& plan) {
    const bool charts = count_of(pool_, AssetKind::chart) > 0;
    const bool photos = count_of(pool_, AssetKind::photo) > 0;
    AssetKind kind = AssetKind::photo;
    if (charts && photos) {
      kind = rng_.bernoulli(0.5) ? AssetKind::chart : AssetKind::photo;
    } else if (charts) {
      kind = AssetKind::chart;
    }
    const SampledAsset asset = sample_asset(pool_, kind, rng_.next());
    const int pct = between(layout_.figure_width_pct);
    double width = col_w_ * pct / 100.0;
    double height = width * asset.raster->height() / asset.raster->width();
    const double max_h = (bottom_ - top_) * layout_.figure_max_height_fraction;
    if (height > max_h) {
      width *= max_h / height;
      height = max_h;
    }
    const int w = std::max(8, static_cast<int>(std::lround(width)));
    const int h = std::max(8, static_cast<int>(std::lround(height)));
    BlockStyle style;
    style.role = BlockRole::figure;
    PlacedBlock block{docmodel::Figure{asset.payload}, {}, 0, std::move(style), asset.raster};
    place(plan, std::move(block), (col_w_ - w) / 2, w, h);
  }

  void add_equation(PagePlan& plan) {
    const SampledAsset asset = sample_asset(pool_, AssetKind::equation, rng_.next());
    std::vector<std::filesystem::path> preferred;
    if (!render_.equation_font_path.empty()) preferred.push_back(render_.equation_font_path);
    auto font = pick_font(preferred, 0, asset.payload);
    BlockStyle style;
    style.role = BlockRole::equation;
    style.size_px = size_;
    style.line_spacing = render_.line_spacing;
    add_text_block(plan, docmodel::Equation{asset.payload}, asset.payload, style, font);
  }

  const LayoutSpec& layout_;
  const Lexicon& lexicon_;
  const AssetPool& pool_;
  const RenderSpec& render_;
  Rng rng_;

  std::vector<std::shared_ptr<const Font>> body_fonts_;
  std::size_t page_font_ = 0;
  double size_ = 14.0;
  int col_w_ = 0;
  int gap_ = 0;
  int block_gap_ = 0;
  int top_ = 0;
  int bottom_ = 0;
  int column_ = 0;
  int y_ = 0;
};

}  // namespace

void validate(const LayoutSpec& spec) {
  auto fail = [](const std::string& message) { throw Error(ErrorCode::InvalidSpec, message); };
  auto check_range = [&](const IntRange& r, int min, int max, const char* name) {
    if (r.lo > r.hi) fail(std::string(name) + " range is empty");
    if (r.lo < min || r.hi > max) {
      fail(std::string(name) + " range must lie within [" + std::to_string(min) + ", " + std::to_string(max) + "]");
    }
  };
  if (spec.columns != 1 && spec.columns != 2) fail("columns must be 1 or 2");
  double total = 0.0;
  for (double w : spec.block_mix) {
    if (!(w >= 0.0)) fail("block weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) fail("block weights sum to zero");
  check_range(spec.table_rows, 2, 8, "table_rows");
  check_range(spec.table_cols, 2, 6, "table_cols");
  check_range(spec.blocks_per_page, 1, 1000, "blocks_per_page");
  check_range(spec.paragraph_words, 1, 100000, "paragraph_words");
  check_range(spec.heading_words, 1, 1000, "heading_words");
  check_range(spec.list_item_words, 1, 1000, "list_item_words");
  check_range(spec.list_items, 1, 100, "list_items");
  check_range(spec.cell_words, 1, 100, "cell_words");
  check_range(spec.figure_width_pct, 1, 100, "figure_width_pct");
  for (double p : {spec.span_probability, spec.numeric_cell_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (!(spec.figure_max_height_fraction > 0.0 && spec.figure_max_height_fraction <= 1.0)) {
    fail("figure_max_height_fraction must lie in (0, 1]");
  }
  if (spec.column_gap_px < 0) fail("column gap must be non-negative");
}

bool overlaps(const Box& a, const Box& b) noexcept {
  return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

PagePlan compose_layout(const LayoutSpec& layout, const Lexicon& lexicon, const AssetPool& pool,
                        const RenderSpec& render, std::uint64_t seed) {
  validate(layout);
  validate(render);
  if (lexicon.entries.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon has no entries");
  return Composer(layout, lexicon, pool, render, seed).run();
}

bool check_plan(const PagePlan& plan, std::string* why) {
  auto fail = [why](std::string message) {
    if (why != nullptr) *why = std::move(message);
    return false;
  };
  const int left = plan.margin_px;
  const int top = plan.margin_px;
  const int right = plan.page_width - plan.margin_px;
  const int bottom = plan.page_height - plan.margin_px;
  const int col_w = (right - left - plan.column_gap_px * (plan.columns - 1)) / plan.columns;
  for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
    const auto& b = plan.blocks[i];
    const std::string where = "block " + std::to_string(i) + ": ";
    if (b.box.width <= 0 || b.box.height <= 0) return fail(where + "empty box");
    if (b.box.x < left || b.box.y < top || b.box.right() > right || b.box.bottom() > bottom) {
      return fail(where + "box outside the margins");
    }
    if (b.column < 0 || b.column >= plan.columns) return fail(where + "bad column");
    const int col_left = left + b.column * (col_w + plan.column_gap_px);
    if (b.box.x < col_left || b.box.right() > col_left + col_w) return fail(where + "box leaves its column");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& a = plan.blocks[j];
      if (a.column == b.column && overlaps(a.box, b.box)) {
        return fail(where + "overlaps block " + std::to_string(j));
      }
    }
    if (i > 0) {
      const auto& prev = plan.blocks[i - 1];
      if (b.column < prev.column) return fail(where + "reading order goes back a column");
      if (b.column == prev.column && b.box.y < prev.box.bottom()) return fail(where + "reading order goes up");
    }
  }
  return true;
}

TableGeometry measure_table(const docmodel::Table& table, const TextStyle& style, int width_px) {
  const docmodel::TextGrid grid = docmodel::expand_table(table);
  const std::size_t n_rows = grid.size();
  const std::size_t n_cols = grid.front().size();

  struct Slot {
    std::size_t row, col, rowspan, colspan;
    const docmodel::TableCell* cell;
  };
  std::vector<Slot> slots;
  std::vector<std::vector<bool>> taken(n_rows, std::vector<bool>(n_cols, false));
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::size_t c = 0;
    for (const auto& cell : table.rows[r]) {
      while (c < n_cols && taken[r][c]) ++c;
      const auto rs = static_cast<std::size_t>(cell.rowspan);
      const auto cs = static_cast<std::size_t>(cell.colspan);
      for (std::size_t rr = r; rr < r + rs; ++rr) {
        for (std::size_t cc = c; cc < c + cs; ++cc) taken[rr][cc] = true;
      }
      slots.push_back({r, c, rs, cs, &cell});
      c += cs;
    }
  }

  TableGeometry geo;
  geo.padding = std::max(3, static_cast<int>(std::lround(style.size_px * 0.35)));
  const int col_w = (width_px - 1) / static_cast<int>(n_cols);
  const int pad = geo.padding;
  const int min_pitch = style.line_height() + 2 * pad + 1;

  std::vector<TextLayout> layouts;
  layouts.reserve(slots.size());
  for (const auto& s : slots) {
    const int inner = static_cast<int>(s.colspan) * col_w - 2 * pad - 1;
    if (inner <= 0) throw Error(ErrorCode::TextTooWide, "table column narrower than its padding");
    layouts.push_back(layout_text(s.cell->text, style, inner));
  }

  std::vector<int> pitch(n_rows, min_pitch);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].rowspan == 1) pitch[slots[i].row] = std::max(pitch[slots[i].row], layouts[i].height + 2 * pad + 1);
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].rowspan == 1) continue;
    int sum = 0;
    for (std::size_t r = slots[i].row; r < slots[i].row + slots[i].rowspan; ++r) sum += pitch[r];
    const int need = layouts[i].height + 2 * pad + 1;
    if (sum < need) pitch[slots[i].row + slots[i].rowspan - 1] += need - sum;
  }
  std::vector<int> row_y(n_rows + 1, 0);
  for (std::size_t r = 0; r < n_rows; ++r) row_y[r + 1] = row_y[r] + pitch[r];

  geo.width = col_w * static_cast<int>(n_cols) + 1;
  geo.height = row_y[n_rows] + 1;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& s = slots[i];
    TableGeometry::Cell cell;
    cell.box = Box{static_cast<int>(s.col) * col_w, row_y[s.row], static_cast<int>(s.colspan) * col_w + 1,
                   row_y[s.row + s.rowspan] - row_y[s.row] + 1};
    cell.text = s.cell->text;
    cell.layout = std::move(layouts[i]);
    geo.cells.push_back(std::move(cell));
  }
  return geo;
}

}  // namespace docforge::synth
