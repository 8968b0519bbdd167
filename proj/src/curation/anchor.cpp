#include "docforge/curation/anchor.hpp"

#include "docforge/core/unicode.hpp"

namespace docforge::curation {

std::string cap_anchor_text(std::string_view text, std::size_t cap) {
  const auto clusters = unicode::grapheme_clusters(text);
  std::string out;
  for (std::size_t i = 0; i < clusters.size() && i < cap; ++i) out += clusters[i];
  return out;
}

}  // namespace docforge::curation
