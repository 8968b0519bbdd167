#pragma once

#include <array>
#include <string>
#include <vector>

#include "docforge/metrics/report.hpp"

namespace docforge::testing {

/// Per-category values of the published BLEU, ROUGE-L and Levenshtein
/// comparison tables, one column per system, with the printed averages.
struct PublishedColumn {
  std::string system;
  std::array<double, 6> values;
  double average;
};

struct PublishedTable {
  std::string metric;
  std::vector<PublishedColumn> columns;
};

inline const std::array<std::string, 6>& published_categories() {
  static const std::array<std::string, 6> c{"Thai Books",   "Thai Government Forms", "Thai Financial Reports",
                                            "Infographics", "Handwriting Forms",     "Others"};
  return c;
}

inline const std::vector<PublishedTable>& published_tables() {
  static const std::vector<PublishedTable> t{
      {"bleu",
       {{"Gemini 2.5 Pro", {0.512, 0.797, 0.657, 0.465, 0.594, 0.603}, 0.605},
        {"GPT-5", {0.710, 0.569, 0.457, 0.297, 0.368, 0.352}, 0.459},
        {"V1 7B", {0.708, 0.849, 0.849, 0.246, 0.321, 0.376}, 0.558},
        {"V1.5 2B", {0.746, 0.870, 0.819, 0.408, 0.522, 0.499}, 0.644}}},
      {"rouge_l",
       {{"Gemini 2.5 Pro", {0.676, 0.894, 0.757, 0.677, 0.739, 0.716}, 0.743},
        {"GPT-5", {0.922, 0.706, 0.603, 0.481, 0.514, 0.482}, 0.618},
        {"V1 7B", {0.871, 0.942, 0.933, 0.373, 0.454, 0.541}, 0.686},
        {"V1.5 2B", {0.949, 0.967, 0.910, 0.527, 0.645, 0.645}, 0.774}}},
      {"lev_norm",
       {{"Gemini 2.5 Pro", {0.334, 0.096, 0.256, 0.380, 0.327, 0.342}, 0.289},
        {"GPT-5", {0.084, 0.267, 0.356, 0.561, 0.533, 0.540}, 0.390},
        {"V1 7B", {0.136, 0.065, 0.082, 0.671, 0.556, 0.480}, 0.332},
        {"V1.5 2B", {0.053, 0.035, 0.079, 0.544, 0.416, 0.377}, 0.251}}},
  };
  return t;
}

/// One single-sample record per category carrying `value` in the field
/// named by `metric`; the other two fields are zero.
inline std::vector<metrics::MetricRecord> records_for(const std::string& metric, const std::array<double, 6>& values) {
  std::vector<metrics::MetricRecord> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    metrics::MetricRecord r{"s" + std::to_string(i), published_categories()[i], {}};
    if (metric == "bleu") r.scores.bleu = values[i];
    if (metric == "rouge_l") r.scores.rouge_l = values[i];
    if (metric == "lev_norm") r.scores.lev_norm = values[i];
    out.push_back(std::move(r));
  }
  return out;
}

inline double field(const metrics::MetricTriple& t, const std::string& metric) {
  if (metric == "bleu") return t.bleu;
  if (metric == "rouge_l") return t.rouge_l;
  return t.lev_norm;
}

}  // namespace docforge::testing
