#include "docforge/docmodel/canonicalize.hpp"

#include <vector>

#include "docforge/core/unicode.hpp"

namespace docforge::docmodel {

namespace {

std::string strip_trailing_whitespace(std::string_view line) {
  std::u32string cps = unicode::decode_utf8(line);
  while (!cps.empty() && unicode::is_whitespace(cps.back())) cps.pop_back();
  return unicode::encode_utf8(cps);
}

}  // namespace

std::string canonicalize(std::string_view text) {
  const std::string nfc = unicode::to_nfc(text);

  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < nfc.size(); ++i) {
    const char c = nfc[i];
    if (c == '\r') {
      if (i + 1 < nfc.size() && nfc[i + 1] == '\n') ++i;
      lines.push_back(strip_trailing_whitespace(current));
      current.clear();
    } else if (c == '\n') {
      lines.push_back(strip_trailing_whitespace(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  lines.push_back(strip_trailing_whitespace(current));

  std::vector<std::string> kept;
  kept.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size();) {
    if (!lines[i].empty()) {
      kept.push_back(std::move(lines[i]));
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i + run < lines.size() && lines[i + run].empty()) ++run;
    const std::size_t keep = run >= 3 ? 1 : run;
    for (std::size_t k = 0; k < keep; ++k) kept.emplace_back();
    i += run;
  }

  std::size_t first = 0;
  while (first < kept.size() && kept[first].empty()) ++first;
  std::size_t last = kept.size();
  while (last > first && kept[last - 1].empty()) --last;

  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out.push_back('\n');
    out += kept[i];
  }
  return out;
}

}  // namespace docforge::docmodel
