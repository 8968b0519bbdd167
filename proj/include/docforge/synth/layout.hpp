#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "docforge/core/image.hpp"
#include "docforge/docmodel/document.hpp"
#include "docforge/synth/assets.hpp"
#include "docforge/synth/lexicon.hpp"
#include "docforge/synth/render_spec.hpp"
#include "docforge/synth/text.hpp"

namespace docforge::synth {

struct IntRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Page composition parameters. `block_mix` is indexed by BlockKind
/// (heading, paragraph, table, figure, equation, list_item); a sampled
/// list_item block expands to `list_items` consecutive items.
struct LayoutSpec {
  int columns = 1;
  std::array<double, 6> block_mix{0.15, 0.45, 0.12, 0.1, 0.08, 0.1};
  IntRange table_rows{2, 6};
  IntRange table_cols{2, 4};
  IntRange blocks_per_page{3, 12};
  IntRange paragraph_words{8, 40};
  IntRange heading_words{2, 6};
  IntRange list_item_words{3, 10};
  IntRange list_items{2, 4};
  IntRange cell_words{1, 3};
  double span_probability = 0.3;          // chance of a colspan header cell / rowspan first-column cell
  double numeric_cell_probability = 0.3;
  IntRange figure_width_pct{45, 90};      // of the column width
  double figure_max_height_fraction = 0.45;  // of the content height
  int column_gap_px = 40;
};

/// Throws InvalidSpec: columns not 1 or 2, negative weights or zero sum,
/// lo > hi, table rows outside [2, 8] or columns outside [2, 6], block count
/// below 1, probabilities outside [0, 1].
void validate(const LayoutSpec& spec);

struct Box {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const noexcept { return x + width; }
  int bottom() const noexcept { return y + height; }
  friend bool operator==(const Box&, const Box&) = default;
};

bool overlaps(const Box& a, const Box& b) noexcept;

enum class BlockRole { body, heading, handwriting, table, equation, figure, list_item };

/// Per-block typography chosen at composition time.
struct BlockStyle {
  BlockRole role = BlockRole::body;
  std::string font_path;  // empty for figures
  double size_px = 0.0;
  double line_spacing = 1.5;
  int indent_px = 0;      // list items: bullet area plus depth indent
};

struct PlacedBlock {
  docmodel::ContentBlock block;
  Box box;
  int column = 0;
  BlockStyle style;
  std::shared_ptr<const Image> raster;  // figures only
};

struct PagePlan {
  int page_width = 0;
  int page_height = 0;
  int margin_px = 0;
  int columns = 1;
  int column_gap_px = 0;
  docmodel::Language language = docmodel::Language::mixed;
  std::vector<PlacedBlock> blocks;  // reading order
};

/// Samples block kinds and contents from Rng(seed) and flows them
/// column-major, top to bottom; a block that does not fit the remaining
/// page is skipped. Throws LayoutInfeasible when nothing could be placed,
/// NoGlyphCoverage / EmptyPoolForKind / InvalidSpec for unusable inputs.
PagePlan compose_layout(const LayoutSpec& layout, const Lexicon& lexicon, const AssetPool& pool,
                        const RenderSpec& render, std::uint64_t seed);

/// Checks the plan invariants: boxes inside the margins, no overlap within a
/// column, sequence order top-to-bottom per column and left column first.
bool check_plan(const PagePlan& plan, std::string* why = nullptr);

/// Table cell geometry shared by composition and rasterization.
struct TableGeometry {
  struct Cell {
    Box box;  // relative to the table origin, including its 1 px rule
    std::string text;
    TextLayout layout;
  };
  std::vector<Cell> cells;
  int width = 0;
  int height = 0;
  int padding = 0;
};

/// Equal-width columns; row heights fit the tallest wrapped cell, rowspan
/// cells stretch their last row when needed. Throws TextTooWide.
TableGeometry measure_table(const docmodel::Table& table, const TextStyle& style, int width_px);

}  // namespace docforge::synth
