#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace docforge::metrics {

enum class TokenMode { script_aware, whitespace, grapheme };

std::string_view to_string(TokenMode mode) noexcept;
TokenMode token_mode_from_string(std::string_view name);

struct TokenizationPolicy {
  TokenMode mode = TokenMode::script_aware;
  bool lowercase = false;

  friend bool operator==(const TokenizationPolicy&, const TokenizationPolicy&) = default;
};

/// "script_aware", "whitespace+lowercase", ...
std::string describe(const TokenizationPolicy& policy);
TokenizationPolicy policy_from_string(std::string_view text);

/// script_aware: whitespace split; ASCII punctuation becomes single-character
/// tokens; any remaining run containing Thai is split into grapheme clusters.
/// whitespace: whitespace split only. grapheme: every non-whitespace
/// grapheme cluster is a token.
std::vector<std::string> tokenize(std::string_view text, const TokenizationPolicy& policy = {});

}  // namespace docforge::metrics
