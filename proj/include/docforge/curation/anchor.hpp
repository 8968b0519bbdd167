#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace docforge::curation {

inline constexpr std::size_t kAnchorCap = 8000;

/// Keeps the first `cap` extended grapheme clusters of `text`.
std::string cap_anchor_text(std::string_view text, std::size_t cap = kAnchorCap);

}  // namespace docforge::curation
