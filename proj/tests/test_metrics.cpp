#include <doctest.h>

#include <cmath>

#include "docforge/core/rng.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/metrics/report.hpp"
#include "docforge/metrics/scores.hpp"
#include "docforge/metrics/tokenize.hpp"
#include "oracles.hpp"
#include "published_tables.hpp"
#include "support.hpp"

using namespace docforge;
using namespace docforge::metrics;
using docforge::testing::code_of;
using docforge::testing::TokenList;

TEST_CASE("tokenize examples") {
  CHECK(tokenize("the cat") == TokenList{"the", "cat"});
  CHECK(tokenize("a, b") == TokenList{"a", ",", "b"});
  // UAX #29 keeps the tone mark with its consonant but leaves SARA AA
  // (U+0E32) as its own cluster.
  CHECK(tokenize("กิน ข้าว") ==
        TokenList{"กิ", "น", "ข้", "า", "ว"});
  CHECK(tokenize("The Cat", {TokenMode::script_aware, true}) == TokenList{"the", "cat"});
  CHECK(tokenize("a, b", {TokenMode::whitespace, false}) == TokenList{"a,", "b"});
  CHECK(tokenize("ab c", {TokenMode::grapheme, false}) == TokenList{"a", "b", "c"});
  CHECK(tokenize("").empty());
  // A token with any Thai in it is split into clusters, Latin letters included.
  CHECK(tokenize("abกิ") == TokenList{"a", "b", "กิ"});
}

TEST_CASE("tokenization policy names") {
  for (TokenMode m : {TokenMode::script_aware, TokenMode::whitespace, TokenMode::grapheme}) {
    for (bool lower : {false, true}) {
      const TokenizationPolicy p{m, lower};
      CHECK(policy_from_string(describe(p)) == p);
    }
  }
  CHECK(describe({}) == "script_aware");
  CHECK(code_of([] { (void)policy_from_string("words"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("bleu examples") {
  const TokenList same{"a", "b", "c", "d", "e"};
  CHECK(bleu(same, same) == doctest::Approx(1.0));
  CHECK(bleu(TokenList{"a", "b"}, TokenList{"a", "c"}, 1) == doctest::Approx(0.5));
  CHECK(bleu(TokenList{}, TokenList{"a"}) == 0.0);
  CHECK(bleu(TokenList{}, TokenList{}) == 1.0);
  CHECK(bleu(TokenList{"x"}, TokenList{"y"}) == 0.0);
  // Brevity penalty only: one matching unigram against a two-token reference.
  CHECK(bleu(TokenList{"a"}, TokenList{"a", "b"}, 1) == doctest::Approx(std::exp(1.0 - 2.0)));
  CHECK(code_of([] { (void)bleu(TokenList{"a"}, TokenList{"a"}, 0); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("rouge_l examples") {
  CHECK(rouge_l(TokenList{"a", "b"}, TokenList{"a", "b"}) == 1.0);
  CHECK(rouge_l(TokenList{"a", "b", "c"}, TokenList{"a", "c"}) == doctest::Approx(0.8));
  CHECK(rouge_l(TokenList{"a", "b"}, TokenList{"c", "d"}) == 0.0);
  CHECK(rouge_l(TokenList{}, TokenList{}) == 1.0);
  CHECK(rouge_l(TokenList{}, TokenList{"a"}) == 0.0);
}

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein_norm("x", "x") == 0.0);
  CHECK(levenshtein_norm("kitten", "sitting") == doctest::Approx(3.0 / 7.0));
  CHECK(levenshtein_norm("", "abc") == 1.0);
  CHECK(levenshtein_norm("", "") == 0.0);
  // One substituted tone mark is one edit over two clusters.
  CHECK(levenshtein_norm("ก่า", "ก้า") == doctest::Approx(0.5));
  // Canonicalization runs first: trailing spaces and CRLF are invisible.
  CHECK(levenshtein_norm("a \r\nb", "a\nb") == 0.0);
}

TEST_CASE("oracle: edit distance, lcs and bleu") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const TokenList a = testing::random_symbols(rng, 12);
    const TokenList b = testing::random_symbols(rng, 12);
    REQUIRE(edit_distance(a, b) == testing::naive_edit_distance(a, b));
  }
  for (int i = 0; i < 200; ++i) {
    const TokenList a = testing::random_symbols(rng, 10);
    const TokenList b = testing::random_symbols(rng, 10);
    REQUIRE(lcs_length(a, b) == testing::exhaustive_lcs(a, b));
    REQUIRE(rouge_l(a, b) == testing::exhaustive_rouge_l(a, b));
  }
  for (int i = 0; i < 200; ++i) {
    const auto [pred, ref] = testing::related_pair(rng, 15);
    const int n = static_cast<int>(rng.between(1, 4));
    REQUIRE(std::fabs(bleu(pred, ref, n) - testing::direct_bleu(pred, ref, n)) <= 1e-12);
  }
}

TEST_CASE("property: metric ranges, identity and symmetry") {
  Rng rng(7);
  for (int i = 0; i < 400; ++i) {
    const std::string a = testing::random_line(rng, 0, 12);
    const std::string b = rng.bernoulli(0.2) ? a : testing::random_line(rng, 0, 12);
    const auto ta = tokenize(a);
    const auto tb = tokenize(b);
    const double bl = bleu(ta, tb);
    const double rl = rouge_l(ta, tb);
    const double lv = levenshtein_norm(a, b);
    REQUIRE(bl >= 0.0);
    REQUIRE(bl <= 1.0);
    REQUIRE(rl >= 0.0);
    REQUIRE(rl <= 1.0);
    REQUIRE(lv >= 0.0);
    REQUIRE(lv <= 1.0);
    REQUIRE(lv == levenshtein_norm(b, a));
    if (!ta.empty()) {
      REQUIRE(bleu(ta, ta) == doctest::Approx(1.0).epsilon(1e-12));
      REQUIRE(rouge_l(ta, ta) == 1.0);
      REQUIRE(levenshtein_norm(a, a) == 0.0);
    }
  }
}

TEST_CASE("property: edit distance obeys the triangle inequality") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const TokenList a = testing::random_symbols(rng, 8, 3);
    const TokenList b = testing::random_symbols(rng, 8, 3);
    const TokenList c = testing::random_symbols(rng, 8, 3);
    REQUIRE(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
    REQUIRE(edit_distance(a, b) == edit_distance(b, a));
  }
}

TEST_CASE("aggregate_report examples") {
  const auto& tables = testing::published_tables();
  const auto bleu_v15 = testing::records_for("bleu", tables[0].columns[3].values);
  CHECK(format3(aggregate_report(bleu_v15).overall.bleu) == "0.644");
  const auto lev_gemini = testing::records_for("lev_norm", tables[2].columns[0].values);
  CHECK(format3(aggregate_report(lev_gemini).overall.lev_norm) == "0.289");

  const std::vector<MetricRecord> one{{"a", "Books", {0.25, 0.5, 0.75}}};
  const MetricReport single = aggregate_report(one);
  REQUIRE(single.per_category.size() == 1);
  CHECK(single.per_category[0].mean == MetricTriple{0.25, 0.5, 0.75});
  CHECK(single.overall == MetricTriple{0.25, 0.5, 0.75});

  CHECK(code_of([] { (void)aggregate_report({}); }) == ErrorCode::NoRecords);
  const std::vector<MetricRecord> bad{{"a", "", {0, 0, 0}}};
  CHECK(code_of([&] { (void)aggregate_report(bad); }) == ErrorCode::PreconditionFailed);
  const std::vector<MetricRecord> out_of_range{{"a", "x", {1.5, 0, 0}}};
  CHECK(code_of([&] { (void)aggregate_report(out_of_range); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("aggregate_report reproduces every published average") {
  for (const auto& table : testing::published_tables()) {
    for (const auto& column : table.columns) {
      const MetricReport r = aggregate_report(testing::records_for(table.metric, column.values));
      CAPTURE(table.metric);
      CAPTURE(column.system);
      CHECK(std::fabs(round_half_even(testing::field(r.overall, table.metric), 3) - column.average) <= 0.0005);
    }
  }
}

TEST_CASE("aggregate_report is a mean of category means") {
  const std::vector<MetricRecord> recs{{"a", "B", {1.0, 1.0, 0.0}},
                                       {"b", "B", {0.0, 0.0, 1.0}},
                                       {"c", "B", {0.5, 0.5, 0.5}},
                                       {"d", "A", {0.2, 0.4, 0.6}}};
  const MetricReport r = aggregate_report(recs);
  REQUIRE(r.per_category.size() == 2);
  CHECK(r.per_category[0].category == "A");
  CHECK(r.per_category[1].count == 3);
  CHECK(r.per_category[1].mean.bleu == doctest::Approx(0.5));
  CHECK(r.overall.bleu == doctest::Approx((0.2 + 0.5) / 2));

  std::vector<MetricRecord> reversed(recs.rbegin(), recs.rend());
  const MetricReport r2 = aggregate_report(reversed);
  CHECK(r2.overall == r.overall);
}

TEST_CASE("property: aggregation is monotone in each record") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MetricRecord> recs;
    const auto n = rng.between(1, 20);
    for (std::int64_t i = 0; i < n; ++i) {
      recs.push_back({"s" + std::to_string(i), "c" + std::to_string(rng.below(4)),
                      {rng.uniform(0.0, 0.9), rng.uniform(), rng.uniform()}});
    }
    const MetricReport before = aggregate_report(recs);
    const std::size_t k = rng.below(recs.size());
    recs[k].scores.bleu += 0.05;
    const MetricReport after = aggregate_report(recs);
    REQUIRE(after.overall.bleu > before.overall.bleu);
    for (std::size_t c = 0; c < after.per_category.size(); ++c) {
      if (after.per_category[c].category == recs[k].category) {
        REQUIRE(after.per_category[c].mean.bleu > before.per_category[c].mean.bleu);
      } else {
        REQUIRE(after.per_category[c].mean.bleu == before.per_category[c].mean.bleu);
      }
    }
  }
}

TEST_CASE("round_half_even") {
  CHECK(round_half_even(0.0005, 3) == 0.0);
  CHECK(round_half_even(0.0015, 3) == doctest::Approx(0.002));
  CHECK(round_half_even(0.0025, 3) == doctest::Approx(0.002));
  CHECK(round_half_even(0.6046666, 3) == doctest::Approx(0.605));
  CHECK(format3(0.1235) == "0.124");
  CHECK(format3(0.1245) == "0.124");
  CHECK(format3(1.0) == "1.000");
  CHECK(format3(0.0) == "0.000");
}
