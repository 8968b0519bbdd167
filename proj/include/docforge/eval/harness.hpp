#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "docforge/core/manifest.hpp"
#include "docforge/eval/predictions.hpp"
#include "docforge/metrics/report.hpp"

namespace docforge::eval {

/// Scores one prediction: BLEU and ROUGE-L over tokens of the canonicalized
/// texts, normalized Levenshtein over their grapheme clusters.
metrics::MetricTriple score_texts(std::string_view prediction, std::string_view ground_truth,
                                  const metrics::TokenizationPolicy& policy);

/// Run metadata printed with every report.
struct ReportContext {
  std::string condition;
  std::string config_fingerprint;
  std::size_t scored = 0;
  std::size_t failed_samples = 0;  // failed generation entries, not scored
  std::size_t missing_predictions = 0;
  std::size_t malformed_responses = 0;
  std::size_t request_failures = 0;

  friend bool operator==(const ReportContext&, const ReportContext&) = default;
};

struct EvalReport {
  metrics::MetricReport metrics;
  ReportContext context;
};

struct EvalRun {
  std::vector<metrics::MetricRecord> records;  // manifest order
  EvalReport report;
};

/// Scores every non-failed entry against its ground-truth file using
/// `jobs` threads (0: hardware concurrency). Throws PreconditionFailed when
/// a scored id has no prediction or the condition cannot be met.
EvalRun run_eval(const CorpusManifest& manifest, const PredictionSet& predictions,
                 const metrics::TokenizationPolicy& policy, EvalCondition condition, unsigned jobs = 0);

enum class ReportFormat { markdown, json };

/// Markdown: one row per category with values rounded half-even to three
/// decimals and an Average row from the unrounded category means. JSON:
/// full precision.
std::string render_report(const EvalReport& report, ReportFormat format);

/// Inverse of the JSON rendering. Throws InvalidConfig.
EvalReport report_from_json(std::string_view json_text);

/// scores.jsonl with {sample_id, category, bleu, rouge_l, lev_norm}.
std::string scores_to_jsonl(const std::vector<metrics::MetricRecord>& records);
std::vector<metrics::MetricRecord> scores_from_jsonl(std::string_view text);

}  // namespace docforge::eval
