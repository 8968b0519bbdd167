#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "docforge/metrics/tokenize.hpp"

namespace docforge::metrics {

struct MetricTriple {
  double bleu = 0.0;
  double rouge_l = 0.0;
  double lev_norm = 0.0;

  friend bool operator==(const MetricTriple&, const MetricTriple&) = default;
};

struct MetricRecord {
  std::string sample_id;
  std::string category;
  MetricTriple scores;
};

struct CategoryStats {
  std::string category;
  MetricTriple mean;
  std::size_t count = 0;
};

struct MetricReport {
  std::vector<CategoryStats> per_category;  // sorted by category name
  MetricTriple overall;                      // unweighted mean of category means
  TokenizationPolicy policy;
};

/// Throws NoRecords on empty input and PreconditionFailed for a record with
/// an empty category or a score outside [0, 1]. Sums run over records sorted
/// by (category, sample_id) so the result does not depend on input order.
MetricReport aggregate_report(std::span<const MetricRecord> records, const TokenizationPolicy& policy = {});

/// Half-to-even at `decimals` places; values within 1e-9 (in units of the
/// last place) of a tie count as the tie.
double round_half_even(double value, int decimals = 3);

/// round_half_even(value, 3) printed with exactly three decimals.
std::string format3(double value);

}  // namespace docforge::metrics
