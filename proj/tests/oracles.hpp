#pragma once

// Slow reference implementations used to cross-check the metrics. Each one
// follows the textbook definition as literally as possible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "docforge/core/rng.hpp"

namespace docforge::testing {

using TokenList = std::vector<std::string>;

/// Recursive definition on suffixes, memoized so length-12 inputs stay cheap.
inline std::size_t naive_edit_distance(const TokenList& a, std::size_t i, const TokenList& b, std::size_t j,
                                       std::vector<std::vector<std::size_t>>& memo) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t& slot = memo[i][j];
  if (slot != static_cast<std::size_t>(-1)) return slot;
  if (a[i] == b[j]) {
    slot = naive_edit_distance(a, i + 1, b, j + 1, memo);
  } else {
    slot = 1 + std::min({naive_edit_distance(a, i + 1, b, j, memo), naive_edit_distance(a, i, b, j + 1, memo),
                         naive_edit_distance(a, i + 1, b, j + 1, memo)});
  }
  return slot;
}

inline std::size_t naive_edit_distance(const TokenList& a, const TokenList& b) {
  std::vector<std::vector<std::size_t>> memo(a.size() + 1, std::vector<std::size_t>(b.size() + 1, -1));
  return naive_edit_distance(a, 0, b, 0, memo);
}

inline bool is_subsequence(const TokenList& needle, const TokenList& hay) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < hay.size() && k < needle.size(); ++i) {
    if (hay[i] == needle[k]) ++k;
  }
  return k == needle.size();
}

/// Enumerates every subsequence of the shorter list.
inline std::size_t exhaustive_lcs(const TokenList& a, const TokenList& b) {
  const TokenList& s = a.size() <= b.size() ? a : b;
  const TokenList& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << s.size()); ++mask) {
    TokenList sub;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(s[i]);
    }
    if (sub.size() > best && is_subsequence(sub, t)) best = sub.size();
  }
  return best;
}

inline double exhaustive_rouge_l(const TokenList& pred, const TokenList& ref) {
  if (pred.empty() && ref.empty()) return 1.0;
  if (pred.empty() || ref.empty()) return 0.0;
  const double l = static_cast<double>(exhaustive_lcs(pred, ref));
  if (l == 0.0) return 0.0;
  const double p = l / static_cast<double>(pred.size());
  const double r = l / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

inline std::size_t occurrences(const TokenList& tokens, const TokenList& gram) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + gram.size() <= tokens.size(); ++i) {
    if (std::equal(gram.begin(), gram.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

/// Modified precisions by linear scans, combined as a product.
inline double direct_bleu(const TokenList& pred, const TokenList& ref, int max_n = 4) {
  if (pred.empty()) return ref.empty() ? 1.0 : 0.0;
  if (ref.empty()) return 0.0;
  double product = 1.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto order = static_cast<std::size_t>(n);
    const std::size_t candidates = pred.size() >= order ? pred.size() - order + 1 : 0;
    std::vector<TokenList> seen;
    std::size_t clipped = 0;
    for (std::size_t i = 0; i < candidates; ++i) {
      TokenList gram(pred.begin() + static_cast<std::ptrdiff_t>(i),
                     pred.begin() + static_cast<std::ptrdiff_t>(i + order));
      if (std::find(seen.begin(), seen.end(), gram) != seen.end()) continue;
      clipped += std::min(occurrences(pred, gram), occurrences(ref, gram));
      seen.push_back(std::move(gram));
    }
    double precision;
    if (clipped == 0) {
      if (n == 1) return 0.0;
      precision = 1.0 / static_cast<double>(candidates + 1);
    } else {
      precision = static_cast<double>(clipped) / static_cast<double>(candidates);
    }
    product *= precision;
  }
  const double bp = pred.size() < ref.size()
                        ? std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(pred.size()))
                        : 1.0;
  return std::pow(product, 1.0 / max_n) * bp;
}

/// Random list over a small alphabet of single-letter symbols.
inline TokenList random_symbols(Rng& rng, std::size_t max_len, std::size_t alphabet = 4) {
  TokenList out(rng.below(max_len + 1));
  for (auto& t : out) t = std::string(1, static_cast<char>('a' + rng.below(alphabet)));
  return out;
}

/// Reference with a mutated copy as prediction, so BLEU cases share n-grams.
inline std::pair<TokenList, TokenList> related_pair(Rng& rng, std::size_t max_len, std::size_t alphabet = 4) {
  TokenList ref = random_symbols(rng, max_len, alphabet);
  TokenList pred;
  for (const auto& t : ref) {
    const auto roll = rng.below(10);
    if (roll == 0) continue;
    if (roll == 1) pred.push_back(std::string(1, static_cast<char>('a' + rng.below(alphabet))));
    pred.push_back(t);
  }
  if (rng.bernoulli(0.2)) pred = random_symbols(rng, max_len, alphabet);
  return {std::move(pred), std::move(ref)};
}

}  // namespace docforge::testing
