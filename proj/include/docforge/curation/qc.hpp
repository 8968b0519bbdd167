#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace docforge::curation {

enum class QcCheck { coverage, duplication, ordering, table_wellformed, alignment_length };
enum class Severity { warn, fail };

std::string_view to_string(QcCheck check) noexcept;
std::string_view to_string(Severity severity) noexcept;
QcCheck qc_check_from_string(std::string_view name);
Severity severity_from_string(std::string_view name);

/// `measure` is in [0, 1] with lower meaning worse for every check:
///   coverage          clipped share of raw tokens found in the annotation
///   duplication       1 / (copies of the most repeated paragraph)
///   ordering          LCS of token streams / shorter stream
///   table_wellformed  0 (a table needed repair)
///   alignment_length  1 - |len(a) - len(r)| / max(len(a), len(r))
struct QcFinding {
  std::string sample_id;
  QcCheck check = QcCheck::coverage;
  Severity severity = Severity::warn;
  double measure = 1.0;
  std::string detail;
};

struct QcThresholds {
  double coverage_fail = 0.70;  // fail at or below
  double coverage_warn = 0.90;  // warn below
  double ordering_fail = 0.60;  // fail below
  double length_warn = 0.5;     // warn when the length difference ratio exceeds this
};

/// Both inputs are reduced to content text with the lenient parser (markup
/// never counts as tokens) and tokenized script-aware. Returns only warn and
/// fail findings; a clean sample yields none.
std::vector<QcFinding> qc_check(std::string_view raw_text, std::string_view annotation,
                                const QcThresholds& thresholds = {}, std::string_view sample_id = {});

struct ReviewSelection {
  std::vector<std::string> review_ids;
  std::vector<std::string> drop_ids;
};

/// Samples with a fail finding are dropped. Of the rest, the
/// ceil(budget_fraction * n) with the lowest minimum measure (1.0 for a
/// sample without findings) go to review, ties by id. Both lists sorted by id.
/// budget_fraction must lie in (0, 1].
ReviewSelection select_for_review(const std::map<std::string, std::vector<QcFinding>>& findings,
                                  double budget_fraction);

}  // namespace docforge::curation
