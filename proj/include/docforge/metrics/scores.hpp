#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace docforge::metrics {

using Tokens = std::span<const std::string>;

/// Corpus-free sentence BLEU: geometric mean of clipped n-gram precisions
/// for n = 1..max_n times the brevity penalty exp(1 - |ref|/|pred|) when
/// |pred| < |ref|. An order n >= 2 with no matching n-gram scores
/// (0 + 1) / (candidates + 1); a zero unigram precision gives 0. Empty pred:
/// 0 unless ref is also empty (then 1). max_n must be >= 1.
double bleu(Tokens pred, Tokens ref, int max_n = 4);

/// LCS length with two rolling rows.
std::size_t lcs_length(Tokens a, Tokens b);

/// ROUGE-L F1; both empty gives 1, no common token gives 0.
double rouge_l(Tokens pred, Tokens ref);

/// Unit-cost edit distance over arbitrary token sequences.
std::size_t edit_distance(Tokens a, Tokens b);

/// Edit distance over grapheme clusters of canonicalized text divided by the
/// longer cluster count; both empty gives 0.
double levenshtein_norm(std::string_view pred, std::string_view ref);

}  // namespace docforge::metrics
