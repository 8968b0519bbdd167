#pragma once

#include <string>
#include <string_view>
#include <vector>

// Thin UTF-8 helpers over ICU. Every function accepts arbitrary bytes:
// ill-formed sequences decode to U+FFFD instead of failing.
namespace docforge::unicode {

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view codepoints);
void append_utf8(std::string& out, char32_t cp);

/// Re-encodes `text`, replacing ill-formed sequences with U+FFFD.
std::string sanitize_utf8(std::string_view text);
bool is_valid_utf8(std::string_view text);

std::string to_nfc(std::string_view text);
bool is_nfc(std::string_view text);

std::string to_lower(std::string_view text);

/// Extended grapheme clusters (UAX #29) in order; concatenation == input
/// (after sanitizing).
std::vector<std::string> grapheme_clusters(std::string_view text);
std::size_t grapheme_count(std::string_view text);

bool is_thai(char32_t cp) noexcept;
bool is_whitespace(char32_t cp) noexcept;
/// General category Mn or Me: drawn on top of the preceding base.
bool is_nonspacing_mark(char32_t cp) noexcept;
bool is_control(char32_t cp) noexcept;
bool contains_thai(std::string_view text);

}  // namespace docforge::unicode
