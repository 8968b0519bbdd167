#include "docforge/core/unicode.hpp"

#include <memory>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>
#include <unicode/utext.h>

#include "docforge/core/error.hpp"

namespace docforge::unicode {

namespace {

const icu::Normalizer2& nfc_normalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw Error(ErrorCode::PreconditionFailed, "ICU NFC normalizer unavailable");
  }
  return *norm;
}

icu::BreakIterator& character_breaker() {
  thread_local std::unique_ptr<icu::BreakIterator> iter = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(
        icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status)) {
      throw Error(ErrorCode::PreconditionFailed, "ICU character break iterator unavailable");
    }
    return it;
  }();
  return *iter;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size());
  for (char32_t cp : codepoints) append_utf8(out, cp);
  return out;
}

bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string sanitize_utf8(std::string_view text) {
  if (is_valid_utf8(text)) return std::string(text);
  return encode_utf8(decode_utf8(text));
}

std::string to_nfc(std::string_view text) {
  const icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfc_normalizer().normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::PreconditionFailed, "NFC normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_nfc(std::string_view text) {
  if (!is_valid_utf8(text)) return false;
  const icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  const bool result = nfc_normalizer().isNormalized(source, status);
  return U_SUCCESS(status) && result;
}

std::string to_lower(std::string_view text) {
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  source.toLower(icu::Locale::getRoot());
  std::string out;
  source.toUTF8String(out);
  return out;
}

std::vector<std::string> grapheme_clusters(std::string_view text) {
  std::vector<std::string> clusters;
  if (text.empty()) return clusters;
  const std::string clean = sanitize_utf8(text);

  UErrorCode status = U_ZERO_ERROR;
  UText* ut = utext_openUTF8(nullptr, clean.data(), static_cast<int64_t>(clean.size()), &status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::PreconditionFailed, "utext_openUTF8 failed");
  }
  icu::BreakIterator& it = character_breaker();
  it.setText(ut, status);
  if (U_FAILURE(status)) {
    utext_close(ut);
    throw Error(ErrorCode::PreconditionFailed, "BreakIterator::setText failed");
  }
  // With a UTF-8 UText the reported boundaries are byte offsets.
  int32_t start = it.first();
  for (int32_t end = it.next(); end != icu::BreakIterator::DONE; start = end, end = it.next()) {
    clusters.emplace_back(clean.substr(static_cast<std::size_t>(start),
                                       static_cast<std::size_t>(end - start)));
  }
  // Detach before closing the UText the iterator still references.
  it.setText(icu::UnicodeString());
  utext_close(ut);
  return clusters;
}

std::size_t grapheme_count(std::string_view text) { return grapheme_clusters(text).size(); }

bool is_thai(char32_t cp) noexcept { return cp >= 0x0E00 && cp <= 0x0E7F; }

bool is_whitespace(char32_t cp) noexcept { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

bool is_nonspacing_mark(char32_t cp) noexcept {
  const int8_t type = u_charType(static_cast<UChar32>(cp));
  return type == U_NON_SPACING_MARK || type == U_ENCLOSING_MARK;
}

bool is_control(char32_t cp) noexcept { return u_charType(static_cast<UChar32>(cp)) == U_CONTROL_CHAR; }

bool contains_thai(std::string_view text) {
  for (char32_t cp : decode_utf8(text)) {
    if (is_thai(cp)) return true;
  }
  return false;
}

}  // namespace docforge::unicode
