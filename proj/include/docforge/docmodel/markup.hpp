#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docforge/docmodel/document.hpp"

namespace docforge::docmodel {

/// Output regime of the ground truth.
///   default_mode:    Markdown only; tables become pipe tables (spans
///                    flattened by duplication), figures become their
///                    description text.
///   structure_mode:  Markdown for text, single-line HTML for tables
///                    (colspan/rowspan only), <figure> tags for figures.
/// Both modes fence equations as "$$\n<source>\n$$" and use ATX headings.
enum class SupervisionMode { default_mode, structure_mode };

std::string_view to_string(SupervisionMode mode) noexcept;
SupervisionMode supervision_mode_from_string(std::string_view name);

/// Deterministic; a valid tree always serializes.
std::string serialize(const DocumentTree& tree, SupervisionMode mode);
std::string serialize(std::span<const ContentBlock> blocks, SupervisionMode mode);

struct Diagnostic {
  std::size_t line = 0;  // 1-based line where the problem starts
  std::string message;
  std::optional<BlockKind> block;  // block kind being recovered, if any

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseResult {
  std::vector<ContentBlock> blocks;
  std::vector<Diagnostic> diagnostics;

  bool empty() const noexcept { return blocks.empty(); }
  /// Throws EmptyDocument when nothing was recognized.
  DocumentTree tree() const;
};

/// Lenient inverse of serialize(): recognizes ATX headings, pipe tables,
/// "$$" fences, HTML tables, <figure> tags and "-"/"*"/"+" list items;
/// anything else becomes paragraph text. Total over arbitrary bytes: every
/// recovered malformation is reported as a Diagnostic, and every returned
/// block satisfies validate_block().
ParseResult parse_structured(std::string_view text);

}  // namespace docforge::docmodel
