#include "docforge/docmodel/markup.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "docforge/core/error.hpp"
#include "docforge/core/unicode.hpp"

namespace docforge::docmodel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::string_view kEscapable = "#|$<-*+\\";

bool is_space_char(char c) { return c == ' ' || c == '\t'; }

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(text[i]) != prefix[i]) return false;
  }
  return true;
}

std::size_t find_ci(std::string_view text, std::string_view needle, std::size_t from) {
  if (needle.empty() || text.size() < needle.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= text.size(); ++i) {
    if (starts_with_ci(text.substr(i), needle)) return i;
  }
  return std::string_view::npos;
}

std::string_view ltrim_spaces(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space_char(s[i])) ++i;
  return s.substr(i);
}

bool is_blank_line(std::string_view line) {
  for (char32_t cp : unicode::decode_utf8(line)) {
    if (!unicode::is_whitespace(cp)) return false;
  }
  return true;
}

std::string trim_unicode(std::string_view text) {
  std::u32string cps = unicode::decode_utf8(text);
  std::size_t b = 0;
  while (b < cps.size() && unicode::is_whitespace(cps[b])) ++b;
  std::size_t e = cps.size();
  while (e > b && unicode::is_whitespace(cps[e - 1])) --e;
  return unicode::encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

/// Single-line field cleanup: NFC, control characters dropped (line breaks
/// and tabs become spaces), outer whitespace trimmed.
std::string clean_inline(std::string_view text) {
  std::u32string out;
  for (char32_t cp : unicode::decode_utf8(unicode::to_nfc(text))) {
    if (cp == U'\n' || cp == U'\t' || cp == U'\r') {
      out.push_back(U' ');
    } else if (!unicode::is_control(cp)) {
      out.push_back(cp);
    }
  }
  return trim_unicode(unicode::to_nfc(unicode::encode_utf8(out)));
}

/// Multi-line field cleanup: NFC, control characters other than newline dropped.
std::string clean_multiline(std::string_view text) {
  std::u32string out;
  for (char32_t cp : unicode::decode_utf8(unicode::to_nfc(text))) {
    if (cp == U'\t') {
      out.push_back(U' ');
    } else if (cp == U'\n' || !unicode::is_control(cp)) {
      out.push_back(cp);
    }
  }
  return unicode::to_nfc(unicode::encode_utf8(out));
}

// ---------------------------------------------------------------- serialize

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Default mode must never emit tag-like sequences.
std::string neutralize_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if (text[i] == '<' && (is_ascii_alpha(next) || next == '/' || next == '!')) {
      out += "&lt;";
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

/// A paragraph line whose first non-space character could open another
/// block gets a backslash in front of that character.
std::string escape_paragraph_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_space_char(line[i])) ++i;
  if (i < line.size() && kEscapable.find(line[i]) != std::string_view::npos) {
    std::string out(line.substr(0, i));
    out.push_back('\\');
    out.append(line.substr(i));
    return out;
  }
  return std::string(line);
}

std::string escape_paragraph(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find('\n', start);
    out += escape_paragraph_line(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    out.push_back('\n');
    start = end + 1;
  }
  return out;
}

std::string escape_pipe_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string serialize_block(const ContentBlock& block, SupervisionMode mode) {
  const bool structure = mode == SupervisionMode::structure_mode;
  auto inline_text = [structure](std::string_view text) {
    return structure ? std::string(text) : neutralize_tags(text);
  };
  return std::visit(
      overloaded{
          [&](const Heading& h) { return std::string(static_cast<std::size_t>(h.level), '#') + " " + inline_text(h.text); },
          [&](const Paragraph& p) { return escape_paragraph(inline_text(p.text)); },
          [&](const Table& t) {
            std::string out;
            if (structure) {
              out += "<table>";
              for (const auto& row : t.rows) {
                out += "<tr>";
                for (const auto& cell : row) {
                  out += "<td";
                  if (cell.colspan > 1) out += " colspan=\"" + std::to_string(cell.colspan) + "\"";
                  if (cell.rowspan > 1) out += " rowspan=\"" + std::to_string(cell.rowspan) + "\"";
                  out += ">";
                  out += escape_html(cell.text);
                  out += "</td>";
                }
                out += "</tr>";
              }
              out += "</table>";
              return out;
            }
            const TextGrid grid = expand_table(t);
            auto emit_row = [&out](const std::vector<std::string>& cells) {
              out += "|";
              for (const auto& cell : cells) out += " " + cell + " |";
            };
            for (std::size_t r = 0; r < grid.size(); ++r) {
              std::vector<std::string> cells;
              cells.reserve(grid[r].size());
              for (const auto& cell : grid[r]) cells.push_back(escape_pipe_cell(neutralize_tags(cell)));
              if (r > 0) out += "\n";
              emit_row(cells);
              if (r == 0) {
                out += "\n";
                emit_row(std::vector<std::string>(grid[r].size(), "---"));
              }
            }
            return out;
          },
          [&](const Figure& f) {
            if (structure) return "<figure>" + escape_html(f.description) + "</figure>";
            return escape_paragraph(neutralize_tags(f.description));
          },
          [&](const Equation& e) { return "$$\n" + inline_text(e.source) + "\n$$"; },
          [&](const ListItem& li) {
            return std::string(static_cast<std::size_t>(li.depth) * 2, ' ') + "- " + inline_text(li.text);
          },
      },
      block);
}

// -------------------------------------------------------------------- parse

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    const std::size_t semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (name == "amp") cp = U'&';
    else if (name == "lt") cp = U'<';
    else if (name == "gt") cp = U'>';
    else if (name == "quot") cp = U'"';
    else if (name == "apos" || name == "#39") cp = U'\'';
    else if (name == "nbsp") cp = U' ';
    else if (name.size() > 1 && name[0] == '#') {
      std::uint32_t value = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() && value > 0 &&
          value <= 0x10FFFF) {
        cp = static_cast<char32_t>(value);
      }
    }
    if (!cp) {
      out.push_back('&');
      continue;
    }
    unicode::append_utf8(out, *cp);
    i = semi;
  }
  return out;
}

bool is_heading_line(std::string_view line, int* level = nullptr, std::string_view* rest = nullptr) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '#') ++n;
  if (n == 0 || n > 6) return false;
  if (n < line.size() && !is_space_char(line[n])) return false;
  const std::string_view tail = line.substr(n);
  if (is_blank_line(tail)) return false;
  if (level != nullptr) *level = static_cast<int>(n);
  if (rest != nullptr) *rest = tail;
  return true;
}

bool is_list_line(std::string_view line, int* depth = nullptr, std::string_view* rest = nullptr) {
  std::size_t indent = 0;
  while (indent < line.size() && line[indent] == ' ') ++indent;
  if (indent + 1 >= line.size()) return false;
  const char marker = line[indent];
  if (marker != '-' && marker != '*' && marker != '+') return false;
  if (!is_space_char(line[indent + 1])) return false;
  const std::string_view tail = line.substr(indent + 2);
  if (is_blank_line(tail)) return false;
  if (depth != nullptr) *depth = static_cast<int>(std::min<std::size_t>(indent / 2, 4));
  if (rest != nullptr) *rest = tail;
  return true;
}

bool opens_tag(std::string_view s, std::string_view name) {
  // s starts with "<name" followed by '>' or whitespace or '/'.
  if (s.size() < name.size() + 1 || s[0] != '<') return false;
  if (!starts_with_ci(s.substr(1), name)) return false;
  if (s.size() == name.size() + 1) return true;
  const char next = s[name.size() + 1];
  return next == '>' || next == '/' || is_space_char(next) || next == '\n';
}

bool starts_block(std::string_view line) {
  const std::string_view s = ltrim_spaces(line);
  if (s.empty()) return false;
  if (opens_tag(s, "table") || opens_tag(s, "figure")) return true;
  if (s.substr(0, 2) == "$$") return true;
  if (s[0] == '|') return true;
  if (is_heading_line(s)) return true;
  if (is_list_line(line)) return true;
  return false;
}

bool is_pipe_separator(std::string_view line) {
  std::string_view s = ltrim_spaces(line);
  if (s.empty() || s[0] != '|') return false;
  s.remove_prefix(1);
  bool any = false;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('|', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view cell = s.substr(start, end - start);
    while (!cell.empty() && is_space_char(cell.front())) cell.remove_prefix(1);
    while (!cell.empty() && is_space_char(cell.back())) cell.remove_suffix(1);
    if (!cell.empty()) {
      if (cell.front() == ':') cell.remove_prefix(1);
      if (!cell.empty() && cell.back() == ':') cell.remove_suffix(1);
      if (cell.size() < 3 || cell.find_first_not_of('-') != std::string_view::npos) return false;
      any = true;
    } else if (end != s.size()) {
      return false;
    }
    start = end + 1;
  }
  return any;
}

std::vector<std::string> split_pipe_row(std::string_view line) {
  std::string_view s = ltrim_spaces(line);
  if (!s.empty() && s.front() == '|') s.remove_prefix(1);
  while (!s.empty() && is_space_char(s.back())) s.remove_suffix(1);
  if (!s.empty() && s.back() == '|' && (s.size() < 2 || s[s.size() - 2] != '\\')) s.remove_suffix(1);

  std::vector<std::string> cells;
  std::string current;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '|') {
      current.push_back('|');
      ++i;
    } else if (s[i] == '|') {
      cells.push_back(clean_inline(current));
      current.clear();
    } else {
      current.push_back(s[i]);
    }
  }
  cells.push_back(clean_inline(current));
  return cells;
}

struct Tag {
  std::string name;  // lowercase, without '/'
  bool closing = false;
  std::string attributes;
};

Tag parse_tag(std::string_view inner) {
  Tag tag;
  std::size_t i = 0;
  while (i < inner.size() && is_space_char(inner[i])) ++i;
  if (i < inner.size() && inner[i] == '/') {
    tag.closing = true;
    ++i;
  }
  while (i < inner.size() && (is_ascii_alpha(inner[i]) || (inner[i] >= '0' && inner[i] <= '9'))) {
    tag.name.push_back(ascii_lower(inner[i]));
    ++i;
  }
  tag.attributes = std::string(inner.substr(i));
  return tag;
}

/// Reads name="v", name='v' or name=v; returns 1 when absent or invalid.
int span_attribute(std::string_view attrs, std::string_view name, bool* invalid) {
  std::size_t pos = find_ci(attrs, name, 0);
  while (pos != std::string_view::npos) {
    const bool boundary_before = pos == 0 || is_space_char(attrs[pos - 1]) || attrs[pos - 1] == '\n';
    std::size_t i = pos + name.size();
    while (i < attrs.size() && is_space_char(attrs[i])) ++i;
    if (boundary_before && i < attrs.size() && attrs[i] == '=') {
      ++i;
      while (i < attrs.size() && is_space_char(attrs[i])) ++i;
      char quote = '\0';
      if (i < attrs.size() && (attrs[i] == '"' || attrs[i] == '\'')) quote = attrs[i++];
      std::size_t end = i;
      while (end < attrs.size() && (quote ? attrs[end] != quote : !is_space_char(attrs[end]) && attrs[end] != '/')) ++end;
      const std::string_view digits = attrs.substr(i, end - i);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 1 || value > 64) {
        *invalid = true;
        return 1;
      }
      return value;
    }
    pos = find_ci(attrs, name, pos + 1);
  }
  return 1;
}

class Parser {
 public:
  explicit Parser(std::string text) : text_(std::move(text)) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  ParseResult run() {
    if (is_blank_line(text_)) {
      result_.diagnostics.push_back({1, "empty input", std::nullopt});
      return std::move(result_);
    }
    while (pos_ < text_.size()) {
      const std::string_view line = current_line();
      if (is_blank_line(line)) {
        next_line();
        continue;
      }
      const std::string_view s = ltrim_spaces(line);
      const std::size_t indent = line.size() - s.size();
      int level = 0;
      int depth = 0;
      std::string_view rest;
      if (opens_tag(s, "table")) {
        parse_html_table(pos_ + indent);
      } else if (opens_tag(s, "figure")) {
        parse_figure(pos_ + indent);
      } else if (s.substr(0, 2) == "$$") {
        parse_equation(s);
      } else if (is_heading_line(s, &level, &rest)) {
        emit(Heading{level, clean_inline(rest)});
        next_line();
      } else if (s.front() == '|') {
        parse_pipe_table();
      } else if (is_list_line(line, &depth, &rest)) {
        emit(ListItem{depth, clean_inline(rest)});
        next_line();
      } else {
        parse_paragraph();
      }
    }
    return std::move(result_);
  }

 private:
  std::size_t line_number(std::size_t offset) const {
    const auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    return static_cast<std::size_t>(it - line_starts_.begin());
  }

  std::string_view current_line() const {
    const std::size_t end = text_.find('\n', pos_);
    return std::string_view(text_).substr(pos_, (end == std::string::npos ? text_.size() : end) - pos_);
  }

  void next_line() {
    const std::size_t end = text_.find('\n', pos_);
    pos_ = end == std::string::npos ? text_.size() : end + 1;
  }

  /// Moves past `offset`; if the rest of that line is blank, past the line.
  void resume_at(std::size_t offset) {
    pos_ = std::min(offset, text_.size());
    if (pos_ < text_.size() && is_blank_line(current_line())) next_line();
  }

  void diagnose(std::size_t offset, std::string message, std::optional<BlockKind> kind) {
    result_.diagnostics.push_back({line_number(offset), std::move(message), kind});
  }

  void emit(ContentBlock block) {
    try {
      validate_block(block);
      result_.blocks.push_back(std::move(block));
    } catch (const Error& e) {
      diagnose(pos_, std::string("dropped invalid block: ") + e.what(), kind_of(block));
    }
  }

  void parse_paragraph() {
    const std::size_t start = pos_;
    std::string text;
    bool first = true;
    while (pos_ < text_.size()) {
      const std::string_view line = current_line();
      if (is_blank_line(line)) break;
      if (!first && starts_block(line)) break;
      std::string unescaped(line);
      const std::size_t lead = line.size() - ltrim_spaces(line).size();
      if (lead + 1 < unescaped.size() && unescaped[lead] == '\\' &&
          kEscapable.find(unescaped[lead + 1]) != std::string_view::npos) {
        unescaped.erase(lead, 1);
      }
      if (!first) text.push_back('\n');
      text += unescaped;
      first = false;
      next_line();
    }
    std::string cleaned = clean_multiline(text);
    if (is_blank_line(cleaned)) {
      diagnose(start, "paragraph with no visible text", BlockKind::paragraph);
      return;
    }
    emit(Paragraph{std::move(cleaned)});
  }

  void parse_equation(std::string_view first_line) {
    const std::size_t start = pos_;
    std::string_view trimmed = first_line;
    while (!trimmed.empty() && is_space_char(trimmed.back())) trimmed.remove_suffix(1);
    std::string source;
    if (trimmed.size() >= 4 && trimmed.substr(trimmed.size() - 2) == "$$") {
      source = std::string(trimmed.substr(2, trimmed.size() - 4));
      next_line();
    } else {
      std::vector<std::string> lines;
      if (!is_blank_line(trimmed.substr(2))) lines.emplace_back(trimmed.substr(2));
      next_line();
      bool closed = false;
      while (pos_ < text_.size()) {
        std::string_view line = current_line();
        std::string_view t = line;
        while (!t.empty() && is_space_char(t.back())) t.remove_suffix(1);
        if (t.size() >= 2 && t.substr(t.size() - 2) == "$$") {
          if (!is_blank_line(t.substr(0, t.size() - 2))) lines.emplace_back(t.substr(0, t.size() - 2));
          next_line();
          closed = true;
          break;
        }
        if (is_blank_line(line) && !lines.empty() && is_blank_line(lines.back())) {
          // Two blank lines inside an open fence: treat it as unclosed.
          break;
        }
        lines.emplace_back(line);
        next_line();
      }
      if (!closed) diagnose(start, "unclosed equation", BlockKind::equation);
      while (!lines.empty() && is_blank_line(lines.back())) lines.pop_back();
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) source += "\n";
        source += lines[i];
      }
    }
    std::size_t stray = source.find("$$");
    if (stray != std::string::npos) {
      diagnose(start, "stray $$ inside equation", BlockKind::equation);
      while (stray != std::string::npos) {
        source.erase(stray, 1);
        stray = source.find("$$");
      }
    }
    std::string cleaned = clean_multiline(source);
    if (is_blank_line(cleaned)) {
      diagnose(start, "empty equation", BlockKind::equation);
      return;
    }
    emit(Equation{std::move(cleaned)});
  }

  void parse_figure(std::size_t start) {
    const std::size_t open_end = text_.find('>', start);
    if (open_end == std::string::npos) {
      diagnose(start, "unterminated figure tag", BlockKind::figure);
      parse_paragraph();
      return;
    }
    const std::size_t close = find_ci(text_, "</figure>", open_end + 1);
    std::size_t content_end = close;
    std::size_t resume = close == std::string::npos ? 0 : close + 9;
    if (close == std::string::npos) {
      diagnose(start, "unclosed figure", BlockKind::figure);
      // Without a closing tag the figure runs to the end of the paragraph.
      std::size_t p = text_.find('\n', open_end);
      while (p != std::string::npos) {
        const std::size_t next = text_.find('\n', p + 1);
        const std::string_view line =
            std::string_view(text_).substr(p + 1, (next == std::string::npos ? text_.size() : next) - p - 1);
        if (is_blank_line(line)) break;
        p = next;
      }
      content_end = p == std::string::npos ? text_.size() : p;
      resume = content_end;
    }
    std::string content = strip_tags(std::string_view(text_).substr(open_end + 1, content_end - open_end - 1));
    std::string description = clean_inline(decode_entities(content));
    resume_at(resume);
    if (description.empty()) {
      diagnose(start, "empty figure", BlockKind::figure);
      return;
    }
    emit(Figure{std::move(description)});
  }

  static std::string strip_tags(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '<') {
        const std::size_t end = text.find('>', i);
        if (end == std::string_view::npos) {
          out.append(text.substr(i));
          break;
        }
        const Tag tag = parse_tag(text.substr(i + 1, end - i - 1));
        if (tag.name == "br") out.push_back(' ');
        i = end;
      } else {
        out.push_back(text[i]);
      }
    }
    return out;
  }

  void parse_pipe_table() {
    const std::size_t start = pos_;
    Table table;
    std::size_t widest = 0;
    bool ragged = false;
    while (pos_ < text_.size()) {
      const std::string_view line = current_line();
      const std::string_view s = ltrim_spaces(line);
      if (s.empty() || s.front() != '|') break;
      if (!is_pipe_separator(line)) {
        std::vector<TableCell> row;
        for (auto& cell : split_pipe_row(line)) row.push_back({std::move(cell), 1, 1});
        if (!table.rows.empty() && row.size() != table.rows.front().size()) ragged = true;
        widest = std::max(widest, row.size());
        table.rows.push_back(std::move(row));
      }
      next_line();
    }
    if (table.rows.empty()) {
      diagnose(start, "pipe table without rows", BlockKind::table);
      return;
    }
    if (ragged) {
      diagnose(start, "ragged pipe table padded to " + std::to_string(widest) + " columns", BlockKind::table);
      for (auto& row : table.rows) row.resize(widest);
    }
    emit(std::move(table));
  }

  void parse_html_table(std::size_t start) {
    const std::size_t close = find_ci(text_, "</table>", start);
    const std::size_t content_end = close == std::string::npos ? text_.size() : close;
    if (close == std::string::npos) diagnose(start, "unclosed table", BlockKind::table);

    // Skip the opening <table ...> itself.
    std::size_t i = text_.find('>', start);
    i = (i == std::string::npos || i > content_end) ? content_end : i + 1;

    const std::string_view body = std::string_view(text_).substr(i, content_end - i);
    Table table = tokenize_table(body, i);
    resume_at(close == std::string::npos ? text_.size() : close + 8);

    if (table.rows.empty()) {
      diagnose(start, "empty table", BlockKind::table);
      return;
    }
    try {
      expand_table(table);
    } catch (const Error& e) {
      diagnose(start, std::string("malformed table repaired: ") + e.what(), BlockKind::table);
      table = repair_table(table);
      if (table.rows.empty()) return;
    }
    emit(std::move(table));
  }

  Table tokenize_table(std::string_view body, std::size_t base) {
    Table table;
    std::optional<std::vector<TableCell>> row;
    std::optional<TableCell> cell;
    std::string cell_text;

    auto close_cell = [&] {
      if (!cell) return;
      cell->text = clean_inline(decode_entities(cell_text));
      row->push_back(std::move(*cell));
      cell.reset();
      cell_text.clear();
    };
    auto close_row = [&] {
      if (!row) return;
      table.rows.push_back(std::move(*row));
      row.reset();
    };

    for (std::size_t i = 0; i < body.size();) {
      if (body[i] != '<') {
        std::size_t end = body.find('<', i);
        if (end == std::string_view::npos) end = body.size();
        const std::string_view run = body.substr(i, end - i);
        if (cell) {
          cell_text.append(run);
        } else if (!is_blank_line(run)) {
          diagnose(base + i, "text outside table cells ignored", BlockKind::table);
        }
        i = end;
        continue;
      }
      const std::size_t end = body.find('>', i);
      if (end == std::string_view::npos) {
        diagnose(base + i, "unterminated tag in table", BlockKind::table);
        if (cell) cell_text.append(body.substr(i + 1));
        break;
      }
      const Tag tag = parse_tag(body.substr(i + 1, end - i - 1));
      if (tag.name == "tr") {
        if (tag.closing) {
          if (cell) {
            diagnose(base + i, "unclosed cell", BlockKind::table);
            close_cell();
          }
          if (!row) diagnose(base + i, "stray </tr>", BlockKind::table);
          close_row();
        } else {
          if (cell) {
            diagnose(base + i, "unclosed cell", BlockKind::table);
            close_cell();
          }
          if (row) {
            diagnose(base + i, "unclosed row", BlockKind::table);
            close_row();
          }
          row.emplace();
        }
      } else if (tag.name == "td" || tag.name == "th") {
        if (tag.closing) {
          if (!cell) diagnose(base + i, "stray </" + tag.name + ">", BlockKind::table);
          close_cell();
        } else {
          if (cell) {
            diagnose(base + i, "unclosed cell", BlockKind::table);
            close_cell();
          }
          if (!row) {
            diagnose(base + i, "cell outside a row", BlockKind::table);
            row.emplace();
          }
          bool invalid = false;
          TableCell fresh;
          fresh.colspan = span_attribute(tag.attributes, "colspan", &invalid);
          fresh.rowspan = span_attribute(tag.attributes, "rowspan", &invalid);
          if (invalid) diagnose(base + i, "invalid span attribute", BlockKind::table);
          cell = std::move(fresh);
        }
      } else if (tag.name == "br") {
        if (cell) cell_text.push_back(' ');
      } else if (tag.name == "table" && !tag.closing) {
        diagnose(base + i, "nested table flattened", BlockKind::table);
      } else if (tag.name == "thead" || tag.name == "tbody" || tag.name == "tfoot" || tag.name == "table" ||
                 tag.name == "caption" || tag.name == "colgroup" || tag.name == "col") {
        // structural wrappers carry no cells
      }
      // Any other tag inside a cell is formatting; its text content is kept.
      i = end + 1;
    }
    if (cell) {
      diagnose(base + body.size(), "unclosed cell", BlockKind::table);
      close_cell();
    }
    if (row) {
      diagnose(base + body.size(), "unclosed row", BlockKind::table);
      close_row();
    }
    return table;
  }

  /// Lenient expansion: clip spans, skip overlaps, pad short rows.
  static Table repair_table(const Table& table) {
    const std::size_t n_rows = table.rows.size();
    std::vector<std::vector<std::optional<std::string>>> grid(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      std::size_t c = 0;
      for (const TableCell& cell : table.rows[r]) {
        while (c < grid[r].size() && grid[r][c].has_value()) ++c;
        const std::size_t rs = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cell.rowspan)), n_rows - r);
        const auto cs = static_cast<std::size_t>(std::max(1, cell.colspan));
        for (std::size_t rr = r; rr < r + rs; ++rr) {
          if (grid[rr].size() < c + cs) grid[rr].resize(c + cs);
          for (std::size_t cc = c; cc < c + cs; ++cc) {
            if (!grid[rr][cc].has_value()) grid[rr][cc] = cell.text;
          }
        }
        c += cs;
      }
    }
    std::size_t width = 0;
    for (const auto& row : grid) width = std::max(width, row.size());
    Table out;
    if (width == 0) return out;
    for (const auto& row : grid) {
      std::vector<TableCell> cells;
      for (std::size_t c = 0; c < width; ++c) {
        cells.push_back({c < row.size() && row[c] ? *row[c] : std::string(), 1, 1});
      }
      out.rows.push_back(std::move(cells));
    }
    return out;
  }

  std::string text_;
  std::vector<std::size_t> line_starts_;
  std::size_t pos_ = 0;
  ParseResult result_;
};

/// Newlines normalized to LF, ill-formed UTF-8 replaced.
std::string prepare_input(std::string_view text) {
  const std::string clean = unicode::sanitize_utf8(text);
  std::string out;
  out.reserve(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (clean[i] == '\r') {
      if (i + 1 < clean.size() && clean[i + 1] == '\n') ++i;
      out.push_back('\n');
    } else {
      out.push_back(clean[i]);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(SupervisionMode mode) noexcept {
  return mode == SupervisionMode::structure_mode ? "structure" : "default";
}

SupervisionMode supervision_mode_from_string(std::string_view name) {
  if (name == "default") return SupervisionMode::default_mode;
  if (name == "structure") return SupervisionMode::structure_mode;
  throw Error(ErrorCode::InvalidConfig, "unknown supervision mode '" + std::string(name) + "'");
}

std::string serialize(std::span<const ContentBlock> blocks, SupervisionMode mode) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0) {
      const bool tight = kind_of(blocks[i]) == BlockKind::list_item && kind_of(blocks[i - 1]) == BlockKind::list_item;
      out += tight ? "\n" : "\n\n";
    }
    out += serialize_block(blocks[i], mode);
  }
  return out;
}

std::string serialize(const DocumentTree& tree, SupervisionMode mode) { return serialize(tree.blocks(), mode); }

DocumentTree ParseResult::tree() const {
  return build_tree(blocks, detect_language(plain_text(blocks)));
}

ParseResult parse_structured(std::string_view text) { return Parser(prepare_input(text)).run(); }

}  // namespace docforge::docmodel
