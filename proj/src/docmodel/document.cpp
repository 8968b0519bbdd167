#include "docforge/docmodel/document.hpp"

#include <algorithm>
#include <optional>

#include "docforge/core/error.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/docmodel/canonicalize.hpp"

namespace docforge::docmodel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_text(std::string_view text, std::string_view what, bool allow_newline) {
  if (!unicode::is_valid_utf8(text)) {
    throw Error(ErrorCode::InvalidBlock, std::string(what) + " is not valid UTF-8");
  }
  if (!unicode::is_nfc(text)) {
    throw Error(ErrorCode::InvalidBlock, std::string(what) + " is not NFC-normalized");
  }
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (cp == U'\n') {
      if (!allow_newline) throw Error(ErrorCode::InvalidBlock, std::string(what) + " contains a newline");
      continue;
    }
    if (unicode::is_control(cp)) {
      throw Error(ErrorCode::InvalidBlock, std::string(what) + " contains a control character");
    }
  }
}

bool is_blank(std::string_view text) {
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (!unicode::is_whitespace(cp)) return false;
  }
  return true;
}

bool has_blank_line(std::string_view text) {
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    if (is_blank(text.substr(start, end - start))) return true;
    start = end + 1;
  }
  return false;
}

std::string trim(std::string_view text) {
  std::u32string cps = unicode::decode_utf8(text);
  std::size_t b = 0;
  while (b < cps.size() && unicode::is_whitespace(cps[b])) ++b;
  std::size_t e = cps.size();
  while (e > b && unicode::is_whitespace(cps[e - 1])) --e;
  return unicode::encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

}  // namespace

std::string_view to_string(Language language) noexcept {
  switch (language) {
    case Language::thai: return "thai";
    case Language::english: return "english";
    case Language::mixed: return "mixed";
  }
  return "mixed";
}

Language language_from_string(std::string_view name) {
  if (name == "thai" || name == "th") return Language::thai;
  if (name == "english" || name == "en") return Language::english;
  if (name == "mixed") return Language::mixed;
  throw Error(ErrorCode::InvalidConfig, "unknown language '" + std::string(name) + "'");
}

BlockKind kind_of(const ContentBlock& block) noexcept {
  return static_cast<BlockKind>(block.index());
}

std::string_view to_string(BlockKind kind) noexcept {
  switch (kind) {
    case BlockKind::heading: return "heading";
    case BlockKind::paragraph: return "paragraph";
    case BlockKind::table: return "table";
    case BlockKind::figure: return "figure";
    case BlockKind::equation: return "equation";
    case BlockKind::list_item: return "list_item";
  }
  return "unknown";
}

TextGrid expand_table(const Table& table) {
  if (table.rows.empty()) throw Error(ErrorCode::MalformedTable, "table has no rows");
  const std::size_t n_rows = table.rows.size();
  std::vector<std::vector<std::optional<std::string>>> grid(n_rows);

  for (std::size_t r = 0; r < n_rows; ++r) {
    std::size_t c = 0;
    for (const TableCell& cell : table.rows[r]) {
      if (cell.colspan < 1 || cell.rowspan < 1) {
        throw Error(ErrorCode::MalformedTable, "span below 1 in row " + std::to_string(r));
      }
      while (c < grid[r].size() && grid[r][c].has_value()) ++c;
      const auto rs = static_cast<std::size_t>(cell.rowspan);
      const auto cs = static_cast<std::size_t>(cell.colspan);
      if (r + rs > n_rows) {
        throw Error(ErrorCode::MalformedTable, "rowspan runs past the last row in row " + std::to_string(r));
      }
      for (std::size_t rr = r; rr < r + rs; ++rr) {
        if (grid[rr].size() < c + cs) grid[rr].resize(c + cs);
        for (std::size_t cc = c; cc < c + cs; ++cc) {
          if (grid[rr][cc].has_value()) {
            throw Error(ErrorCode::MalformedTable, "overlapping spans at row " + std::to_string(rr) +
                                                       ", column " + std::to_string(cc));
          }
          grid[rr][cc] = cell.text;
        }
      }
      c += cs;
    }
  }

  const std::size_t width = grid.front().size();
  TextGrid out(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (grid[r].size() != width) {
      throw Error(ErrorCode::MalformedTable, "row " + std::to_string(r) + " expands to " +
                                                 std::to_string(grid[r].size()) + " columns, expected " +
                                                 std::to_string(width));
    }
    out[r].reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!grid[r][c]) {
        throw Error(ErrorCode::MalformedTable, "hole at row " + std::to_string(r) + ", column " + std::to_string(c));
      }
      out[r].push_back(*grid[r][c]);
    }
  }
  if (width == 0) throw Error(ErrorCode::MalformedTable, "table has no columns");
  return out;
}

void validate_block(const ContentBlock& block) {
  std::visit(
      overloaded{
          [](const Heading& h) {
            if (h.level < 1 || h.level > 6) {
              throw Error(ErrorCode::InvalidHeadingLevel, "heading level " + std::to_string(h.level));
            }
            check_text(h.text, "heading text", false);
            if (is_blank(h.text)) throw Error(ErrorCode::InvalidBlock, "empty heading");
          },
          [](const Paragraph& p) {
            check_text(p.text, "paragraph text", true);
            if (is_blank(p.text)) throw Error(ErrorCode::InvalidBlock, "empty paragraph");
            if (has_blank_line(p.text)) throw Error(ErrorCode::InvalidBlock, "paragraph contains a blank line");
          },
          [](const Table& t) {
            for (const auto& row : t.rows) {
              for (const auto& cell : row) check_text(cell.text, "table cell", false);
            }
            expand_table(t);
          },
          [](const Figure& f) {
            check_text(f.description, "figure description", false);
            if (is_blank(f.description)) throw Error(ErrorCode::InvalidBlock, "empty figure description");
          },
          [](const Equation& e) {
            check_text(e.source, "equation source", true);
            if (is_blank(e.source)) throw Error(ErrorCode::InvalidBlock, "empty equation source");
            if (e.source.find("$$") != std::string::npos) {
              throw Error(ErrorCode::InvalidBlock, "equation source contains the $$ fence");
            }
          },
          [](const ListItem& li) {
            if (li.depth < 0 || li.depth > 4) {
              throw Error(ErrorCode::InvalidBlock, "list depth " + std::to_string(li.depth));
            }
            check_text(li.text, "list item text", false);
            if (is_blank(li.text)) throw Error(ErrorCode::InvalidBlock, "empty list item");
          },
      },
      block);
}

DocumentTree build_tree(std::vector<ContentBlock> blocks, Language language) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyDocument, "document has no blocks");
  for (const auto& block : blocks) validate_block(block);
  return DocumentTree(std::move(blocks), language);
}

std::string plain_text(std::span<const ContentBlock> blocks) {
  std::string out;
  auto append = [&out](std::string_view text) {
    if (!out.empty()) out += "\n\n";
    out += text;
  };
  for (const auto& block : blocks) {
    std::visit(overloaded{
                   [&](const Heading& h) { append(h.text); },
                   [&](const Paragraph& p) { append(p.text); },
                   [&](const Table& t) {
                     std::string rows;
                     for (const auto& row : t.rows) {
                       if (!rows.empty()) rows += '\n';
                       std::string line;
                       for (const auto& cell : row) {
                         if (cell.text.empty()) continue;
                         if (!line.empty()) line += ' ';
                         line += cell.text;
                       }
                       rows += line;
                     }
                     append(rows);
                   },
                   [&](const Figure& f) { append(f.description); },
                   [&](const Equation& e) { append(e.source); },
                   [&](const ListItem& li) { append(li.text); },
               },
               block);
  }
  return out;
}

std::string plain_text(const DocumentTree& tree) { return plain_text(tree.blocks()); }

Language detect_language(std::string_view text) {
  bool thai = false;
  bool latin = false;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (unicode::is_thai(cp)) {
      thai = true;
    } else if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z')) {
      latin = true;
    }
  }
  if (thai && !latin) return Language::thai;
  if (latin && !thai) return Language::english;
  return Language::mixed;
}

bool equivalent(std::span<const ContentBlock> a, std::span<const ContentBlock> b, std::string* why) {
  auto fail = [why](std::string message) {
    if (why != nullptr) *why = std::move(message);
    return false;
  };
  if (a.size() != b.size()) {
    return fail("block count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string where = "block " + std::to_string(i) + ": ";
    if (a[i].index() != b[i].index()) {
      return fail(where + "kind " + std::string(to_string(kind_of(a[i]))) + " vs " +
                  std::string(to_string(kind_of(b[i]))));
    }
    bool same = true;
    std::string detail;
    switch (kind_of(a[i])) {
      case BlockKind::heading: {
        const auto& x = std::get<Heading>(a[i]);
        const auto& y = std::get<Heading>(b[i]);
        same = x.level == y.level && canonicalize(trim(x.text)) == canonicalize(trim(y.text));
        detail = "heading '" + x.text + "' vs '" + y.text + "'";
        break;
      }
      case BlockKind::paragraph:
        same = canonicalize(std::get<Paragraph>(a[i]).text) == canonicalize(std::get<Paragraph>(b[i]).text);
        detail = "paragraph text differs";
        break;
      case BlockKind::table: {
        const auto& x = std::get<Table>(a[i]);
        const auto& y = std::get<Table>(b[i]);
        TextGrid gx;
        TextGrid gy;
        try {
          gx = expand_table(x);
          gy = expand_table(y);
        } catch (const Error& e) {
          return fail(where + e.what());
        }
        auto canon = [](TextGrid& g) {
          for (auto& row : g) {
            for (auto& cell : row) cell = canonicalize(trim(cell));
          }
        };
        canon(gx);
        canon(gy);
        same = gx == gy;
        if (same) {
          // Span layout must survive too, not only the expanded text.
          for (std::size_t r = 0; same && r < x.rows.size(); ++r) {
            same = x.rows[r].size() == y.rows[r].size();
            for (std::size_t c = 0; same && c < x.rows[r].size(); ++c) {
              same = x.rows[r][c].colspan == y.rows[r][c].colspan &&
                     x.rows[r][c].rowspan == y.rows[r][c].rowspan;
            }
          }
        }
        detail = "table grid or spans differ";
        break;
      }
      case BlockKind::figure:
        same = canonicalize(trim(std::get<Figure>(a[i]).description)) ==
               canonicalize(trim(std::get<Figure>(b[i]).description));
        detail = "figure description differs";
        break;
      case BlockKind::equation:
        same = canonicalize(std::get<Equation>(a[i]).source) == canonicalize(std::get<Equation>(b[i]).source);
        detail = "equation source differs";
        break;
      case BlockKind::list_item: {
        const auto& x = std::get<ListItem>(a[i]);
        const auto& y = std::get<ListItem>(b[i]);
        same = x.depth == y.depth && canonicalize(trim(x.text)) == canonicalize(trim(y.text));
        detail = "list item differs";
        break;
      }
    }
    if (!same) return fail(where + detail);
  }
  return true;
}

}  // namespace docforge::docmodel
