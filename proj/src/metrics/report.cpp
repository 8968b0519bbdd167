#include "docforge/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "docforge/core/error.hpp"

namespace docforge::metrics {

MetricReport aggregate_report(std::span<const MetricRecord> records, const TokenizationPolicy& policy) {
  if (records.empty()) throw Error(ErrorCode::NoRecords, "no metric records to aggregate");

  std::vector<const MetricRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& record : records) {
    if (record.category.empty()) {
      throw Error(ErrorCode::PreconditionFailed, "record '" + record.sample_id + "' has no category");
    }
    for (double v : {record.scores.bleu, record.scores.rouge_l, record.scores.lev_norm}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::PreconditionFailed, "record '" + record.sample_id + "' has a score outside [0,1]");
      }
    }
    sorted.push_back(&record);
  }
  std::sort(sorted.begin(), sorted.end(), [](const MetricRecord* a, const MetricRecord* b) {
    return a->category != b->category ? a->category < b->category : a->sample_id < b->sample_id;
  });

  MetricReport report;
  report.policy = policy;
  for (std::size_t i = 0; i < sorted.size();) {
    CategoryStats stats;
    stats.category = sorted[i]->category;
    MetricTriple sum;
    for (; i < sorted.size() && sorted[i]->category == stats.category; ++i) {
      sum.bleu += sorted[i]->scores.bleu;
      sum.rouge_l += sorted[i]->scores.rouge_l;
      sum.lev_norm += sorted[i]->scores.lev_norm;
      ++stats.count;
    }
    const auto n = static_cast<double>(stats.count);
    stats.mean = {sum.bleu / n, sum.rouge_l / n, sum.lev_norm / n};
    report.per_category.push_back(std::move(stats));
  }

  MetricTriple sum;
  for (const auto& stats : report.per_category) {
    sum.bleu += stats.mean.bleu;
    sum.rouge_l += stats.mean.rouge_l;
    sum.lev_norm += stats.mean.lev_norm;
  }
  const auto k = static_cast<double>(report.per_category.size());
  report.overall = {sum.bleu / k, sum.rouge_l / k, sum.lev_norm / k};
  return report;
}

double round_half_even(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = value * scale;
  const double floor = std::floor(scaled);
  const double frac = scaled - floor;
  double rounded;
  if (std::fabs(frac - 0.5) < 1e-9) {
    rounded = std::fmod(floor, 2.0) == 0.0 ? floor : floor + 1.0;
  } else {
    rounded = std::round(scaled);
  }
  return rounded / scale;
}

std::string format3(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", round_half_even(value, 3));
  return buf;
}

}  // namespace docforge::metrics
