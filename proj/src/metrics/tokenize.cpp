#include "docforge/metrics/tokenize.hpp"

#include "docforge/core/error.hpp"
#include "docforge/core/unicode.hpp"

namespace docforge::metrics {

namespace {

bool is_ascii_punct(char32_t cp) noexcept {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
         (cp >= 0x7B && cp <= 0x7E);
}

std::vector<std::u32string> split_whitespace(std::u32string_view text) {
  std::vector<std::u32string> words;
  std::u32string current;
  for (char32_t cp : text) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

void emit_run(std::u32string_view run, std::vector<std::string>& out) {
  if (run.empty()) return;
  const std::string utf8 = unicode::encode_utf8(run);
  bool thai = false;
  for (char32_t cp : run) thai = thai || unicode::is_thai(cp);
  if (!thai) {
    out.push_back(utf8);
    return;
  }
  for (auto& cluster : unicode::grapheme_clusters(utf8)) out.push_back(std::move(cluster));
}

}  // namespace

std::string_view to_string(TokenMode mode) noexcept {
  switch (mode) {
    case TokenMode::script_aware: return "script_aware";
    case TokenMode::whitespace: return "whitespace";
    case TokenMode::grapheme: return "grapheme";
  }
  return "script_aware";
}

TokenMode token_mode_from_string(std::string_view name) {
  if (name == "script_aware") return TokenMode::script_aware;
  if (name == "whitespace") return TokenMode::whitespace;
  if (name == "grapheme") return TokenMode::grapheme;
  throw Error(ErrorCode::InvalidConfig, "unknown tokenization mode '" + std::string(name) + "'");
}

std::string describe(const TokenizationPolicy& policy) {
  std::string out(to_string(policy.mode));
  if (policy.lowercase) out += "+lowercase";
  return out;
}

TokenizationPolicy policy_from_string(std::string_view text) {
  TokenizationPolicy policy;
  constexpr std::string_view suffix = "+lowercase";
  if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
    policy.lowercase = true;
    text.remove_suffix(suffix.size());
  }
  policy.mode = token_mode_from_string(text);
  return policy;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizationPolicy& policy) {
  const std::string prepared = policy.lowercase ? unicode::to_lower(text) : unicode::sanitize_utf8(text);
  std::vector<std::string> out;

  if (policy.mode == TokenMode::grapheme) {
    for (auto& cluster : unicode::grapheme_clusters(prepared)) {
      bool blank = true;
      for (char32_t cp : unicode::decode_utf8(cluster)) blank = blank && unicode::is_whitespace(cp);
      if (!blank) out.push_back(std::move(cluster));
    }
    return out;
  }

  const std::u32string cps = unicode::decode_utf8(prepared);
  for (const auto& word : split_whitespace(cps)) {
    if (policy.mode == TokenMode::whitespace) {
      out.push_back(unicode::encode_utf8(word));
      continue;
    }
    std::size_t start = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (is_ascii_punct(word[i])) {
        emit_run(std::u32string_view(word).substr(start, i - start), out);
        out.push_back(std::string(1, static_cast<char>(word[i])));
        start = i + 1;
      }
    }
    emit_run(std::u32string_view(word).substr(start), out);
  }
  return out;
}

}  // namespace docforge::metrics
