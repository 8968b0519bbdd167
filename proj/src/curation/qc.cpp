#include "docforge/curation/qc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "docforge/core/error.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/docmodel/canonicalize.hpp"
#include "docforge/docmodel/markup.hpp"
#include "docforge/metrics/scores.hpp"
#include "docforge/metrics/tokenize.hpp"

namespace docforge::curation {

namespace {

constexpr double kEps = 1e-12;

std::string ratio_text(std::size_t num, std::size_t den) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu/%zu", num, den);
  return buf;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending = false;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (unicode::is_whitespace(cp)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    unicode::append_utf8(out, cp);
  }
  return out;
}

}  // namespace

std::string_view to_string(QcCheck check) noexcept {
  switch (check) {
    case QcCheck::coverage: return "coverage";
    case QcCheck::duplication: return "duplication";
    case QcCheck::ordering: return "ordering";
    case QcCheck::table_wellformed: return "table_wellformed";
    case QcCheck::alignment_length: return "alignment_length";
  }
  return "coverage";
}

std::string_view to_string(Severity severity) noexcept { return severity == Severity::fail ? "fail" : "warn"; }

QcCheck qc_check_from_string(std::string_view name) {
  for (QcCheck c : {QcCheck::coverage, QcCheck::duplication, QcCheck::ordering, QcCheck::table_wellformed,
                    QcCheck::alignment_length}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown QC check '" + std::string(name) + "'");
}

Severity severity_from_string(std::string_view name) {
  if (name == "warn") return Severity::warn;
  if (name == "fail") return Severity::fail;
  throw Error(ErrorCode::InvalidConfig, "unknown severity '" + std::string(name) + "'");
}

std::vector<QcFinding> qc_check(std::string_view raw_text, std::string_view annotation,
                                const QcThresholds& thresholds, std::string_view sample_id) {
  const docmodel::ParseResult raw_parse = docmodel::parse_structured(raw_text);
  const docmodel::ParseResult ann_parse = docmodel::parse_structured(annotation);
  const std::string raw_content = docmodel::canonicalize(docmodel::plain_text(raw_parse.blocks));
  const std::string ann_content = docmodel::canonicalize(docmodel::plain_text(ann_parse.blocks));
  const std::vector<std::string> raw_tokens = metrics::tokenize(raw_content);
  const std::vector<std::string> ann_tokens = metrics::tokenize(ann_content);

  std::vector<QcFinding> findings;
  auto add = [&](QcCheck check, Severity severity, double measure, std::string detail) {
    findings.push_back({std::string(sample_id), check, severity, std::clamp(measure, 0.0, 1.0), std::move(detail)});
  };

  // coverage
  if (!raw_tokens.empty()) {
    std::unordered_map<std::string_view, std::size_t> available;
    for (const auto& t : ann_tokens) ++available[t];
    std::size_t found = 0;
    for (const auto& t : raw_tokens) {
      auto it = available.find(t);
      if (it != available.end() && it->second > 0) {
        --it->second;
        ++found;
      }
    }
    const double coverage = static_cast<double>(found) / static_cast<double>(raw_tokens.size());
    const std::string detail = ratio_text(found, raw_tokens.size()) + " raw tokens present";
    if (coverage <= thresholds.coverage_fail + kEps) {
      add(QcCheck::coverage, Severity::fail, coverage, detail);
    } else if (coverage < thresholds.coverage_warn) {
      add(QcCheck::coverage, Severity::warn, coverage, detail);
    }
  }

  // duplication
  {
    std::map<std::string, std::size_t> copies;
    for (const auto& block : ann_parse.blocks) {
      if (const auto* p = std::get_if<docmodel::Paragraph>(&block)) {
        std::string key = collapse_whitespace(docmodel::canonicalize(p->text));
        if (!key.empty()) ++copies[std::move(key)];
      }
    }
    std::size_t worst = 1;
    std::string worst_text;
    for (const auto& [text, count] : copies) {
      if (count > worst) {
        worst = count;
        worst_text = text;
      }
    }
    if (worst >= 2) {
      std::string preview = worst_text.substr(0, std::min<std::size_t>(worst_text.size(), 60));
      preview = unicode::sanitize_utf8(preview);
      add(QcCheck::duplication, Severity::fail, 1.0 / static_cast<double>(worst),
          "paragraph repeated " + std::to_string(worst) + " times: " + preview);
    }
  }

  // ordering
  if (!raw_tokens.empty() && !ann_tokens.empty()) {
    const std::size_t lcs = metrics::lcs_length(raw_tokens, ann_tokens);
    const std::size_t shorter = std::min(raw_tokens.size(), ann_tokens.size());
    const double ordering = static_cast<double>(lcs) / static_cast<double>(shorter);
    if (ordering < thresholds.ordering_fail) {
      add(QcCheck::ordering, Severity::fail, ordering, "common subsequence " + ratio_text(lcs, shorter));
    }
  }

  // table_wellformed
  {
    std::size_t problems = 0;
    std::string first;
    for (const auto& d : ann_parse.diagnostics) {
      if (d.block == docmodel::BlockKind::table) {
        if (problems == 0) first = "line " + std::to_string(d.line) + ": " + d.message;
        ++problems;
      }
    }
    if (problems > 0) {
      add(QcCheck::table_wellformed, Severity::fail, 0.0,
          std::to_string(problems) + " table diagnostic(s), first at " + first);
    }
  }

  // alignment_length
  {
    const std::size_t la = unicode::grapheme_count(ann_content);
    const std::size_t lr = unicode::grapheme_count(raw_content);
    const std::size_t longest = std::max(la, lr);
    if (longest > 0) {
      const std::size_t diff = la > lr ? la - lr : lr - la;
      const double ratio = static_cast<double>(diff) / static_cast<double>(longest);
      if (ratio > thresholds.length_warn) {
        add(QcCheck::alignment_length, Severity::warn, 1.0 - ratio,
            "lengths " + std::to_string(la) + " vs " + std::to_string(lr) + " clusters");
      }
    }
  }
  return findings;
}

ReviewSelection select_for_review(const std::map<std::string, std::vector<QcFinding>>& findings,
                                  double budget_fraction) {
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    throw Error(ErrorCode::PreconditionFailed, "budget fraction must lie in (0, 1]");
  }
  ReviewSelection out;
  std::vector<std::pair<double, std::string>> kept;
  for (const auto& [id, list] : findings) {
    bool failed = false;
    double lowest = 1.0;
    for (const auto& f : list) {
      failed = failed || f.severity == Severity::fail;
      lowest = std::min(lowest, f.measure);
    }
    if (failed) {
      out.drop_ids.push_back(id);
    } else {
      kept.emplace_back(lowest, id);
    }
  }
  std::sort(kept.begin(), kept.end());
  const auto quota = static_cast<std::size_t>(
      std::ceil(budget_fraction * static_cast<double>(kept.size()) - 1e-9));
  for (std::size_t i = 0; i < std::min(quota, kept.size()); ++i) out.review_ids.push_back(kept[i].second);
  std::sort(out.review_ids.begin(), out.review_ids.end());
  return out;
}

}  // namespace docforge::curation
