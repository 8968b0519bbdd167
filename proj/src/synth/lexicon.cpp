#include "docforge/synth/lexicon.hpp"

#include <sstream>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/core/unicode.hpp"

namespace docforge::synth {

std::string_view to_string(ScriptTag tag) noexcept {
  switch (tag) {
    case ScriptTag::thai: return "thai";
    case ScriptTag::latin: return "latin";
    case ScriptTag::mixed: return "mixed";
  }
  return "mixed";
}

Lexicon make_lexicon(std::vector<std::string> entries) {
  if (entries.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon has no entries");
  bool thai = false;
  bool other = false;
  for (const auto& word : entries) {
    if (word.empty()) throw Error(ErrorCode::InvalidSpec, "lexicon contains an empty entry");
    if (!unicode::is_valid_utf8(word) || !unicode::is_nfc(word)) {
      throw Error(ErrorCode::InvalidSpec, "lexicon entry '" + unicode::sanitize_utf8(word) + "' is not NFC UTF-8");
    }
    for (char32_t cp : unicode::decode_utf8(word)) {
      if (unicode::is_whitespace(cp) || unicode::is_control(cp)) {
        throw Error(ErrorCode::InvalidSpec, "lexicon entry '" + word + "' contains whitespace or a control character");
      }
      if (unicode::is_thai(cp)) {
        thai = true;
      } else {
        other = true;
      }
    }
  }
  Lexicon lexicon;
  lexicon.entries = std::move(entries);
  lexicon.script_tag = thai && !other ? ScriptTag::thai : (!thai ? ScriptTag::latin : ScriptTag::mixed);
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    entries.push_back(std::move(line));
  }
  return make_lexicon(std::move(entries));
}

std::vector<std::string> sample_vocab(const Lexicon& lexicon, std::size_t word_count, std::uint64_t seed) {
  if (lexicon.entries.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon has no entries");
  Rng rng(seed);
  std::vector<std::string> words;
  words.reserve(word_count);
  for (std::size_t i = 0; i < word_count; ++i) {
    words.push_back(lexicon.entries[rng.below(lexicon.entries.size())]);
  }
  return words;
}

}  // namespace docforge::synth
