#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace docforge::docmodel {

enum class Language { thai, english, mixed };

std::string_view to_string(Language language) noexcept;
Language language_from_string(std::string_view name);

struct Heading {
  int level = 1;  // 1..6
  std::string text;
  friend bool operator==(const Heading&, const Heading&) = default;
};

struct Paragraph {
  std::string text;
  friend bool operator==(const Paragraph&, const Paragraph&) = default;
};

struct TableCell {
  std::string text;
  int colspan = 1;
  int rowspan = 1;
  friend bool operator==(const TableCell&, const TableCell&) = default;
};

/// Rows in source order, each listing only the cells that start in it
/// (HTML table model); spans are resolved by expand_table().
struct Table {
  std::vector<std::vector<TableCell>> rows;
  friend bool operator==(const Table&, const Table&) = default;
};

struct Figure {
  std::string description;
  friend bool operator==(const Figure&, const Figure&) = default;
};

struct Equation {
  std::string source;  // LaTeX syntax
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct ListItem {
  int depth = 0;  // 0..4
  std::string text;
  friend bool operator==(const ListItem&, const ListItem&) = default;
};

using ContentBlock = std::variant<Heading, Paragraph, Table, Figure, Equation, ListItem>;

enum class BlockKind { heading, paragraph, table, figure, equation, list_item };

BlockKind kind_of(const ContentBlock& block) noexcept;
std::string_view to_string(BlockKind kind) noexcept;

using TextGrid = std::vector<std::vector<std::string>>;

/// Resolves spans into a rectangular grid, duplicating a spanning cell's text
/// into every position it covers. Throws MalformedTable when rows expand to
/// different widths, spans overlap, or a rowspan runs past the last row.
TextGrid expand_table(const Table& table);

/// Validated, immutable document: sequence order is reading order.
class DocumentTree {
 public:
  const std::vector<ContentBlock>& blocks() const noexcept { return blocks_; }
  Language language() const noexcept { return language_; }

  friend bool operator==(const DocumentTree&, const DocumentTree&) = default;

 private:
  friend DocumentTree build_tree(std::vector<ContentBlock> blocks, Language language);
  DocumentTree(std::vector<ContentBlock> blocks, Language language)
      : blocks_(std::move(blocks)), language_(language) {}

  std::vector<ContentBlock> blocks_;
  Language language_ = Language::mixed;
};

/// Validates every block and returns the tree; invalid input is rejected,
/// never repaired. Errors: EmptyDocument, MalformedTable,
/// InvalidHeadingLevel, InvalidBlock (text not NFC, control characters,
/// empty paragraph, list depth out of range, ...).
DocumentTree build_tree(std::vector<ContentBlock> blocks, Language language);

/// Throws like build_tree would for this one block.
void validate_block(const ContentBlock& block);

/// Block texts in reading order, one block per line group; table cells are
/// space-separated per row. This is what a text layer of the page holds.
std::string plain_text(std::span<const ContentBlock> blocks);
std::string plain_text(const DocumentTree& tree);

/// thai when every letter is Thai, english when every letter is Latin.
Language detect_language(std::string_view text);

/// Block-by-block comparison after canonicalizing every text field and
/// trimming cells. On mismatch, `why` (if given) receives a description.
bool equivalent(std::span<const ContentBlock> a, std::span<const ContentBlock> b,
                std::string* why = nullptr);

}  // namespace docforge::docmodel
