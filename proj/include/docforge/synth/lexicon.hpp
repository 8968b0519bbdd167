#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace docforge::synth {

enum class ScriptTag { thai, latin, mixed };

std::string_view to_string(ScriptTag tag) noexcept;

struct Lexicon {
  std::vector<std::string> entries;
  ScriptTag script_tag = ScriptTag::mixed;
};

/// Validates entries (non-empty list, each entry NFC, non-empty, free of
/// whitespace and control characters) and derives the script tag.
/// Errors: EmptyLexicon, InvalidSpec.
Lexicon make_lexicon(std::vector<std::string> entries);

/// One word per line; blank lines and lines starting with '#' are skipped.
Lexicon load_lexicon(const std::filesystem::path& path);

/// `word_count` uniform draws with replacement from Rng(seed).
std::vector<std::string> sample_vocab(const Lexicon& lexicon, std::size_t word_count, std::uint64_t seed);

}  // namespace docforge::synth
