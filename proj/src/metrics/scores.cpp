#include "docforge/metrics/scores.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "docforge/core/error.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/docmodel/canonicalize.hpp"

namespace docforge::metrics {

namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts count_ngrams(Tokens tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

double bleu(Tokens pred, Tokens ref, int max_n) {
  if (max_n < 1) throw Error(ErrorCode::PreconditionFailed, "bleu max_n must be >= 1");
  if (pred.empty()) return ref.empty() ? 1.0 : 0.0;
  if (ref.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto order = static_cast<std::size_t>(n);
    const NgramCounts pred_counts = count_ngrams(pred, order);
    const NgramCounts ref_counts = count_ngrams(ref, order);
    std::size_t matched = 0;
    for (const auto& [gram, count] : pred_counts) {
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    const std::size_t total = pred.size() >= order ? pred.size() - order + 1 : 0;
    double precision = 0.0;
    if (matched == 0) {
      if (n == 1) return 0.0;
      precision = 1.0 / static_cast<double>(total + 1);
    } else {
      precision = static_cast<double>(matched) / static_cast<double>(total);
    }
    log_sum += std::log(precision);
  }
  const double geo_mean = std::exp(log_sum / max_n);
  const double bp =
      pred.size() < ref.size() ? std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(pred.size()))
                               : 1.0;
  return std::clamp(geo_mean * bp, 0.0, 1.0);
}

std::size_t lcs_length(Tokens a, Tokens b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(Tokens pred, Tokens ref) {
  if (pred.empty() && ref.empty()) return 1.0;
  if (pred.empty() || ref.empty()) return 0.0;
  const std::size_t l = lcs_length(pred, ref);
  if (l == 0) return 0.0;
  const double p = static_cast<double>(l) / static_cast<double>(pred.size());
  const double r = static_cast<double>(l) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

std::size_t edit_distance(Tokens a, Tokens b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double levenshtein_norm(std::string_view pred, std::string_view ref) {
  const auto p = unicode::grapheme_clusters(docmodel::canonicalize(pred));
  const auto r = unicode::grapheme_clusters(docmodel::canonicalize(ref));
  const std::size_t longest = std::max(p.size(), r.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(edit_distance(p, r)) / static_cast<double>(longest);
}

}  // namespace docforge::metrics
