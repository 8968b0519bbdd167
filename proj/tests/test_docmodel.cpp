#include <doctest.h>

#include "docforge/core/error.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/docmodel/canonicalize.hpp"
#include "docforge/docmodel/document.hpp"
#include "docforge/docmodel/markup.hpp"
#include "support.hpp"

using namespace docforge;
using namespace docforge::docmodel;
using docforge::testing::code_of;

namespace {

std::string structure(std::vector<ContentBlock> blocks) {
  return serialize(build_tree(std::move(blocks), Language::mixed), SupervisionMode::structure_mode);
}

std::string plain(std::vector<ContentBlock> blocks) {
  return serialize(build_tree(std::move(blocks), Language::mixed), SupervisionMode::default_mode);
}

Table grid(std::vector<std::vector<std::string>> cells) {
  Table t;
  for (auto& row : cells) {
    t.rows.emplace_back();
    for (auto& c : row) t.rows.back().push_back({c, 1, 1});
  }
  return t;
}

}  // namespace

TEST_CASE("build_tree accepts valid blocks and rejects invalid ones") {
  CHECK(build_tree({Paragraph{"สวัสดี"}}, Language::thai).blocks().size() == 1);
  CHECK(code_of([] { build_tree({}, Language::thai); }) == ErrorCode::EmptyDocument);
  CHECK(code_of([] { build_tree({Heading{7, "x"}}, Language::thai); }) == ErrorCode::InvalidHeadingLevel);
  CHECK(code_of([] { build_tree({Heading{0, "x"}}, Language::thai); }) == ErrorCode::InvalidHeadingLevel);
  CHECK(code_of([] { build_tree({grid({{"a", "b", "c"}, {"d", "e", "f"}, {"g", "h"}})}, Language::thai); }) ==
        ErrorCode::MalformedTable);
  CHECK(code_of([] { build_tree({Paragraph{""}}, Language::thai); }) == ErrorCode::InvalidBlock);
  CHECK(code_of([] { build_tree({Paragraph{"a\n\nb"}}, Language::thai); }) == ErrorCode::InvalidBlock);
  CHECK(code_of([] { build_tree({Paragraph{"a\tb"}}, Language::thai); }) == ErrorCode::InvalidBlock);
  CHECK(code_of([] { build_tree({Paragraph{"กุ่"}}, Language::thai); }) == ErrorCode::InvalidBlock);
  CHECK(code_of([] { build_tree({ListItem{5, "x"}}, Language::thai); }) == ErrorCode::InvalidBlock);
  CHECK(code_of([] { build_tree({Equation{"a $$ b"}}, Language::thai); }) == ErrorCode::InvalidBlock);
}

TEST_CASE("expand_table duplicates spanning cells") {
  Table t;
  t.rows = {{{"h", 2, 1}, {"x", 1, 2}}, {{"a", 1, 1}, {"b", 1, 1}}};
  const TextGrid g = expand_table(t);
  CHECK(g == TextGrid{{"h", "h", "x"}, {"a", "b", "x"}});

  Table overlap;
  overlap.rows = {{{"a", 1, 2}, {"b", 1, 1}}, {{"c", 2, 1}}};
  CHECK(code_of([&] { expand_table(overlap); }) == ErrorCode::MalformedTable);
  Table past;
  past.rows = {{{"a", 1, 3}}};
  CHECK(code_of([&] { expand_table(past); }) == ErrorCode::MalformedTable);
}

TEST_CASE("structure mode serialization") {
  CHECK(structure({Heading{1, "บทที่ 1"}, Paragraph{"ข้อความ"}}) == "# บทที่ 1\n\nข้อความ");
  CHECK(structure({grid({{"a", "b"}, {"c", "d"}})}) ==
        "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>");
  CHECK(structure({Figure{"bar chart of revenue"}}) == "<figure>bar chart of revenue</figure>");
  CHECK(structure({Equation{"E = mc^{2}"}}) == "$$\nE = mc^{2}\n$$");
  CHECK(structure({ListItem{0, "a"}, ListItem{1, "b"}}) == "- a\n  - b");
  Table spans;
  spans.rows = {{{"h", 2, 1}}, {{"a", 1, 1}, {"b", 1, 1}}};
  CHECK(structure({spans}) == "<table><tr><td colspan=\"2\">h</td></tr><tr><td>a</td><td>b</td></tr></table>");
  CHECK(structure({grid({{"a<b & c"}})}) == "<table><tr><td>a&lt;b &amp; c</td></tr></table>");
}

TEST_CASE("default mode serialization") {
  CHECK(plain({Figure{"bar chart of revenue"}}) == "bar chart of revenue");
  Table spans;
  spans.rows = {{{"h", 2, 1}}, {{"a", 1, 1}, {"b", 1, 1}}};
  CHECK(plain({spans}) == "| h | h |\n| --- | --- |\n| a | b |");
  CHECK(plain({grid({{"x|y"}})}) == "| x\\|y |\n| --- |");
  CHECK(plain({Paragraph{"# not a heading"}}) == "\\# not a heading");
}

TEST_CASE("parse_structured examples") {
  const ParseResult a = parse_structured("# A\n\nB");
  CHECK(a.diagnostics.empty());
  CHECK(a.blocks == std::vector<ContentBlock>{Heading{1, "A"}, Paragraph{"B"}});

  const ParseResult unclosed = parse_structured("<table><tr><td>x</td></tr>");
  REQUIRE(unclosed.blocks.size() == 1);
  CHECK(unclosed.blocks[0] == ContentBlock{grid({{"x"}})});
  REQUIRE_FALSE(unclosed.diagnostics.empty());
  CHECK(unclosed.diagnostics[0].message == "unclosed table");
  // Re-serializing the recovered table gives the well-formed markup.
  CHECK(serialize(unclosed.tree(), SupervisionMode::structure_mode) ==
        "<table><tr><td>x</td></tr></table>");

  const ParseResult empty = parse_structured("");
  CHECK(empty.blocks.empty());
  REQUIRE(empty.diagnostics.size() == 1);
  CHECK(empty.diagnostics[0].message == "empty input");
  CHECK(code_of([&] { (void)empty.tree(); }) == ErrorCode::EmptyDocument);
}

TEST_CASE("parse_structured reads pipe tables and fences") {
  const ParseResult r = parse_structured("| a | b |\n| --- | --- |\n| c | d |\n\n$$\nx^2\n$$\n\n<figure>cat</figure>\n\n- one\n  - two");
  CHECK(r.diagnostics.empty());
  CHECK(r.blocks == std::vector<ContentBlock>{grid({{"a", "b"}, {"c", "d"}}), Equation{"x^2"}, Figure{"cat"},
                                              ListItem{0, "one"}, ListItem{1, "two"}});
}

TEST_CASE("parse_structured repairs malformed tables") {
  const ParseResult r = parse_structured("<table><tr><td rowspan=\"5\">a</td></tr></table>");
  REQUIRE(r.blocks.size() == 1);
  CHECK_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics[0].block == BlockKind::table);
  validate_block(r.blocks[0]);

  const ParseResult ragged = parse_structured("| a | b |\n| --- | --- |\n| c |");
  REQUIRE(ragged.blocks.size() == 1);
  CHECK(ragged.blocks[0] == ContentBlock{grid({{"a", "b"}, {"c", ""}})});
  CHECK_FALSE(ragged.diagnostics.empty());
}

TEST_CASE("canonicalize rules") {
  CHECK(canonicalize("a \r\nb") == "a\nb");
  CHECK(canonicalize("\n\na\n\n\n\n\nb\n\n") == "a\n\nb");
  CHECK(canonicalize("a\n\n\nb") == "a\n\n\nb");
  CHECK(canonicalize("a\n\nb") == "a\n\nb");
  CHECK(canonicalize("e\u0301") == "\u00E9");
  // SARA AM has only a compatibility decomposition, so NFC keeps both forms
  // distinct (checked against Python's unicodedata).
  CHECK(canonicalize("นำ") == "นำ");
  CHECK(canonicalize("นํา") == "นํา");
  CHECK(canonicalize("\u0E01\u0E48\u0E38") == "\u0E01\u0E38\u0E48");
}

TEST_CASE("property: canonicalize is idempotent") {
  Rng rng(11);
  const std::vector<std::string> pieces{"a", " ", "\n", "\r\n", "\r", "\t", "ก", "่", "ุ", "é",
                                        "\n\n\n", "  \n", "\xff", "น้ำ"};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const auto n = rng.between(0, 20);
    for (std::int64_t k = 0; k < n; ++k) s += pieces[rng.below(pieces.size())];
    const std::string once = canonicalize(s);
    CHECK(canonicalize(once) == once);
  }
}

TEST_CASE("property: structure round trip on random trees") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    auto blocks = testing::random_blocks(rng);
    const DocumentTree tree = build_tree(blocks, Language::mixed);
    const std::string text = serialize(tree, SupervisionMode::structure_mode);
    const ParseResult parsed = parse_structured(text);
    std::string why;
    INFO(text);
    CHECK(parsed.diagnostics.empty());
    CHECK(equivalent(tree.blocks(), parsed.blocks, &why));
    if (!why.empty()) INFO(why);
    CHECK(serialize(tree, SupervisionMode::structure_mode) == text);
  }
}

TEST_CASE("property: default mode never emits HTML") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const std::string text = serialize(build_tree(testing::random_blocks(rng), Language::mixed),
                                       SupervisionMode::default_mode);
    CHECK(text.find("<table") == std::string::npos);
    CHECK(text.find("<figure") == std::string::npos);
    CHECK(text.find("<td") == std::string::npos);
  }
  // Text that looks like markup is neutralized.
  CHECK(plain({Paragraph{"<table> and <figure>"}}).find("<table") == std::string::npos);
}

TEST_CASE("property: default mode parses back to the same text") {
  Rng rng(78);
  for (int i = 0; i < 300; ++i) {
    const auto tree = build_tree(testing::random_blocks(rng), Language::mixed);
    const std::string text = serialize(tree, SupervisionMode::default_mode);
    const ParseResult parsed = parse_structured(text);
    REQUIRE_FALSE(parsed.blocks.empty());
    CHECK(serialize(parsed.tree(), SupervisionMode::default_mode) == text);
  }
}

TEST_CASE("property: parse_structured is total and its blocks are valid") {
  Rng rng(5);
  const std::vector<std::string> pieces{
      "<table>", "</table>", "<tr>", "</tr>", "<td>", "</td>", "<td colspan=\"3\">", "<td rowspan=\"0\">",
      "<td rowspan=\"99999999999\">", "<figure>", "</figure>", "$$", "\n", "\n\n", "# ", "###### ", "####### ",
      "| a | b |", "| --- |", "- ", "    - ", "* ", "text", "ข้อความ", "&amp;", "&#x0E01;", "&#0;", "&bogus;",
      "\\", "\xff\xfe", "\x01", "\r", " ", "<", ">", "\"", "<b>", "่", "$"};
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const auto n = rng.between(0, 30);
    for (std::int64_t k = 0; k < n; ++k) s += pieces[rng.below(pieces.size())];
    ParseResult r;
    CHECK_NOTHROW(r = parse_structured(s));
    for (const auto& b : r.blocks) CHECK_NOTHROW(validate_block(b));
    if (r.blocks.empty()) {
      CHECK_FALSE(r.diagnostics.empty());
    } else {
      CHECK_NOTHROW((void)r.tree());
    }
  }
  // Raw random bytes as well.
  for (int i = 0; i < 2000; ++i) {
    std::string s(static_cast<std::size_t>(rng.below(64)), '\0');
    for (char& c : s) c = static_cast<char>(rng.below(256));
    ParseResult r;
    CHECK_NOTHROW(r = parse_structured(s));
    for (const auto& b : r.blocks) CHECK_NOTHROW(validate_block(b));
  }
}

TEST_CASE("plain_text and language detection") {
  const auto tree = build_tree({Heading{1, "หัวข้อ"}, grid({{"a", "b"}, {"c", ""}}), Figure{"cat"}}, Language::mixed);
  CHECK(plain_text(tree) == "หัวข้อ\n\na b\nc\n\ncat");
  CHECK(detect_language("สวัสดี 123") == Language::thai);
  CHECK(detect_language("hello") == Language::english);
  CHECK(detect_language("hello สวัสดี") == Language::mixed);
}
