#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "docforge/core/rng.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/curation/anchor.hpp"
#include "docforge/curation/mixture.hpp"
#include "docforge/curation/qc.hpp"
#include "docforge/curation/resize.hpp"
#include "support.hpp"

using namespace docforge;
using namespace docforge::curation;
using docforge::testing::code_of;

namespace {

const ResizePolicy kV1{ResizeVariant::v1_fixed_width, 1800};
const ResizePolicy kV15{ResizeVariant::v15_resolution_aware, 1800};

const std::vector<std::string>& five_paragraphs() {
  static const std::vector<std::string> p{
      "การประชุมคณะกรรมการบริหารจัดขึ้นในวันจันทร์ที่ผ่านมา",
      "รายงานงบประมาณประจำปีแสดงรายได้เพิ่มขึ้นอย่างต่อเนื่อง",
      "นักเรียนทุกคนต้องส่งแบบฟอร์มลงทะเบียนก่อนสิ้นเดือน",
      "โรงพยาบาลประจำจังหวัดเปิดให้บริการตลอดยี่สิบสี่ชั่วโมง",
      "เกษตรกรในภาคเหนือปลูกข้าวเหนียวเป็นพืชหลัก",
  };
  return p;
}

std::string join_paragraphs(const std::vector<std::string>& paras) {
  std::string out;
  for (const auto& p : paras) {
    if (!out.empty()) out += "\n\n";
    out += p;
  }
  return out;
}

const QcFinding* find(const std::vector<QcFinding>& findings, QcCheck check) {
  for (const auto& f : findings) {
    if (f.check == check) return &f;
  }
  return nullptr;
}

Image noise_image(int w, int h, std::uint64_t seed) {
  Image img(w, h);
  Rng rng(seed);
  for (auto& b : img.bytes()) b = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

}  // namespace

TEST_CASE("resize examples") {
  CHECK(resized_dimensions(3600, 2400, kV1) == std::pair{1800, 1200});
  CHECK(resized_dimensions(1600, 1200, kV15) == std::pair{1600, 1200});
  CHECK(resized_dimensions(1200, 2400, kV15) == std::pair{900, 1800});
  CHECK(resized_dimensions(1800, 10, kV15) == std::pair{1800, 10});
  CHECK(resized_dimensions(900, 1, kV1) == std::pair{1800, 2});
  CHECK(resized_dimensions(100000, 1, kV1) == std::pair{1800, 1});
  CHECK(code_of([] { (void)resized_dimensions(0, 10, kV1); }) == ErrorCode::ZeroDimension);
  CHECK(code_of([] { (void)resized_dimensions(10, -1, kV15); }) == ErrorCode::ZeroDimension);
  CHECK(code_of([] { (void)resized_dimensions(10, 10, {ResizeVariant::v1_fixed_width, 0}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(resize_variant_from_string(to_string(ResizeVariant::v1_fixed_width)) == ResizeVariant::v1_fixed_width);
}

TEST_CASE("resize_image resamples pixels") {
  const Image small = noise_image(120, 80, 1);
  CHECK(resize_image(small, kV15) == small);

  const Image flat(3600, 2400, {10, 200, 30});
  const Image down = resize_image(flat, kV1);
  CHECK(down.width() == 1800);
  CHECK(down.height() == 1200);
  CHECK(down.at(0, 0) == Rgb{10, 200, 30});
  CHECK(down.at(1799, 1199) == Rgb{10, 200, 30});

  // Exact 2:1 area averaging of a checkerboard gives mid grey.
  Image checker(3600, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3600; ++x) {
      const std::uint8_t v = (x + y) % 2 == 0 ? 0 : 200;
      checker.set(x, y, {v, v, v});
    }
  }
  const Image grey = resize_image(checker, kV1);
  CHECK(grey.height() == 1);
  CHECK(grey.at(900, 0) == Rgb{100, 100, 100});

  const Image up = resize_image(Image(900, 10, {50, 60, 70}), kV1);
  CHECK(up.width() == 1800);
  CHECK(up.height() == 20);
  CHECK(up.at(1000, 7) == Rgb{50, 60, 70});
}

TEST_CASE("property: resize policies over random dimensions") {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const int w = static_cast<int>(rng.between(1, 6000));
    const int h = static_cast<int>(rng.between(1, 6000));
    const auto [w1, h1] = resized_dimensions(w, h, kV1);
    REQUIRE(w1 == 1800);
    REQUIRE(std::fabs(h1 - 1800.0 * h / w) <= 1.0);
    REQUIRE(h1 >= 1);
    const auto [w2, h2] = resized_dimensions(w, h, kV15);
    if (std::max(w, h) < 1800) {
      REQUIRE(w2 == w);
      REQUIRE(h2 == h);
    } else {
      REQUIRE(std::max(w2, h2) == 1800);
      if (w >= h) {
        REQUIRE(std::fabs(h2 - 1800.0 * h / w) <= 1.0);
      } else {
        REQUIRE(std::fabs(w2 - 1800.0 * w / h) <= 1.0);
      }
    }
  }
  for (int i = 0; i < 30; ++i) {
    const int w = static_cast<int>(rng.between(1, 1799));
    const int h = static_cast<int>(rng.between(1, 1799));
    const Image img = noise_image(std::min(w, 400), std::min(h, 400), static_cast<std::uint64_t>(i));
    const Image out = resize_image(img, kV15);
    REQUIRE(out == img);
    REQUIRE(resize_image(out, kV15) == out);
  }
}

TEST_CASE("mixture examples") {
  MixtureConfig normalized{{{"v1", 0.537}, {"vqa", 0.022}, {"layout", 0.064}, {"synthetic", 0.376}}, 155403, true};
  const auto counts = allocate_counts(normalized);
  CHECK(counts == std::vector<std::uint64_t>{83535, 3422, 9956, 58490});
  CHECK(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == 155403);

  // The published percentages sum to 0.999, so without renormalization they
  // are rejected.
  MixtureConfig raw = normalized;
  raw.renormalize = false;
  CHECK(code_of([&] { (void)allocate_counts(raw); }) == ErrorCode::InvalidWeights);

  const MixtureConfig single{{{"only", 1.0}}, 5, false};
  CHECK(mixture_sample(single, 1) == std::vector<std::string>(5, "only"));

  CHECK(code_of([] { (void)allocate_counts({{{"a", 0.0}, {"b", 1.0}}, 5, false}); }) == ErrorCode::InvalidWeights);
  CHECK(code_of([] { (void)allocate_counts({{{"a", 1.5}}, 5, true}); }) == ErrorCode::InvalidWeights);
  CHECK(code_of([] { (void)allocate_counts({{}, 5, false}); }) == ErrorCode::PreconditionFailed);
  CHECK(code_of([] { (void)allocate_counts({{{"a", 1.0}}, 0, false}); }) == ErrorCode::PreconditionFailed);

  // Ties on the fractional part go to the earlier component.
  CHECK(allocate_counts({{{"a", 0.5}, {"b", 0.5}}, 3, false}) == std::vector<std::uint64_t>{2, 1});
}

TEST_CASE("property: mixture counts are exact and seed independent") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto k = static_cast<std::size_t>(rng.between(1, 6));
    std::vector<double> raw(k);
    for (auto& w : raw) w = rng.uniform(0.01, 1.0);
    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    MixtureConfig cfg;
    for (std::size_t i = 0; i < k; ++i) cfg.components.push_back({"c" + std::to_string(i), raw[i] / sum});
    cfg.total_samples = static_cast<std::uint64_t>(rng.between(1, 5000));
    cfg.renormalize = true;

    const auto counts = allocate_counts(cfg);
    REQUIRE(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == cfg.total_samples);
    for (std::size_t i = 0; i < k; ++i) {
      const double exact = raw[i] / sum * static_cast<double>(cfg.total_samples);
      REQUIRE(std::fabs(static_cast<double>(counts[i]) - exact) < 1.0);
    }
    const auto a = mixture_sample(cfg, 1);
    const auto b = mixture_sample(cfg, 2);
    REQUIRE(a.size() == cfg.total_samples);
    for (std::size_t i = 0; i < k; ++i) {
      const auto label = cfg.components[i].label;
      REQUIRE(static_cast<std::uint64_t>(std::count(a.begin(), a.end(), label)) == counts[i]);
      REQUIRE(std::count(a.begin(), a.end(), label) == std::count(b.begin(), b.end(), label));
    }
    REQUIRE(mixture_sample(cfg, 1) == a);
  }
}

TEST_CASE("qc examples") {
  const std::string raw = join_paragraphs(five_paragraphs());
  CHECK(qc_check(raw, raw).empty());

  std::vector<std::string> dup = five_paragraphs();
  dup.insert(dup.begin() + 2, dup[1]);
  const auto dup_findings = qc_check(raw, join_paragraphs(dup), {}, "s1");
  const QcFinding* d = find(dup_findings, QcCheck::duplication);
  REQUIRE(d != nullptr);
  CHECK(d->severity == Severity::fail);
  CHECK(d->measure == doctest::Approx(0.5));
  CHECK(d->sample_id == "s1");

  std::vector<std::string> reversed(five_paragraphs().rbegin(), five_paragraphs().rend());
  const auto rev_findings = qc_check(raw, join_paragraphs(reversed));
  const QcFinding* o = find(rev_findings, QcCheck::ordering);
  REQUIRE(o != nullptr);
  CHECK(o->severity == Severity::fail);
  CHECK(o->measure == doctest::Approx(84.0 / 199.0));
  CHECK(find(rev_findings, QcCheck::coverage) == nullptr);

  // Markup never counts as content.
  CHECK(qc_check("A heading\n\nbody text", "# A heading\n\nbody text").empty());

  const auto broken = qc_check("a b", "<table><tr><td rowspan=\"3\">a b</td></tr></table>");
  const QcFinding* t = find(broken, QcCheck::table_wellformed);
  REQUIRE(t != nullptr);
  CHECK(t->severity == Severity::fail);

  const auto shortened = qc_check("one two three four five six seven eight nine ten", "one two three");
  const QcFinding* c = find(shortened, QcCheck::coverage);
  REQUIRE(c != nullptr);
  CHECK(c->severity == Severity::fail);
  CHECK(c->measure == doctest::Approx(0.3));
  const QcFinding* len = find(shortened, QcCheck::alignment_length);
  REQUIRE(len != nullptr);
  CHECK(len->severity == Severity::warn);

  // Exactly 70% coverage is a fail, 80% a warning and 90% passes.
  const std::string ten = "a b c d e f g h i j";
  const QcFinding* seventy = find(qc_check(ten, "a b c d e f g"), QcCheck::coverage);
  REQUIRE(seventy != nullptr);
  CHECK(seventy->severity == Severity::fail);
  const QcFinding* eighty = find(qc_check(ten, "a b c d e f g h"), QcCheck::coverage);
  REQUIRE(eighty != nullptr);
  CHECK(eighty->severity == Severity::warn);
  CHECK(find(qc_check(ten, "a b c d e f g h i"), QcCheck::coverage) == nullptr);
  CHECK(find(qc_check(ten, ten), QcCheck::coverage) == nullptr);

  CHECK(qc_check_from_string("ordering") == QcCheck::ordering);
  CHECK(severity_from_string("warn") == Severity::warn);
  CHECK(code_of([] { (void)qc_check_from_string("spelling"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("property: qc passes clean generated text and catches corruptions") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> paras;
    for (int i = 0; i < 6; ++i) paras.push_back(testing::random_line(rng, 6, 14) + " p" + std::to_string(i));
    const std::string raw = join_paragraphs(paras);
    const auto clean = qc_check(raw, raw);
    REQUIRE(std::none_of(clean.begin(), clean.end(), [](const QcFinding& f) { return f.severity == Severity::fail; }));

    std::vector<std::string> dup = paras;
    dup.push_back(paras[rng.below(paras.size())]);
    const auto df = qc_check(raw, join_paragraphs(dup));
    REQUIRE(find(df, QcCheck::duplication) != nullptr);
  }
}

TEST_CASE("select_for_review examples") {
  std::map<std::string, std::vector<QcFinding>> clean;
  for (int i = 0; i < 10; ++i) clean["s" + std::to_string(i)] = {};
  const ReviewSelection a = select_for_review(clean, 0.1);
  CHECK(a.review_ids == std::vector<std::string>{"s0"});
  CHECK(a.drop_ids.empty());

  std::map<std::string, std::vector<QcFinding>> three{
      {"a", {}},
      {"b", {{"b", QcCheck::ordering, Severity::fail, 0.3, ""}}},
      {"c", {{"c", QcCheck::coverage, Severity::warn, 0.8, ""}}},
  };
  const ReviewSelection b = select_for_review(three, 0.5);
  CHECK(b.drop_ids == std::vector<std::string>{"b"});
  CHECK(b.review_ids == std::vector<std::string>{"c"});

  const ReviewSelection all = select_for_review(three, 1.0);
  CHECK(all.review_ids == std::vector<std::string>{"a", "c"});

  CHECK(code_of([&] { (void)select_for_review(three, 0.0); }) == ErrorCode::PreconditionFailed);
  CHECK(code_of([&] { (void)select_for_review(three, 1.5); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("property: select_for_review partitions within budget") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::map<std::string, std::vector<QcFinding>> findings;
    const auto n = rng.between(1, 40);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::string id = "id" + std::to_string(rng.below(1000));
      auto& list = findings[id];
      const auto k = rng.below(3);
      for (std::uint64_t j = 0; j < k; ++j) {
        list.push_back({id, QcCheck::coverage, rng.bernoulli(0.2) ? Severity::fail : Severity::warn, rng.uniform(), ""});
      }
    }
    const double budget = rng.uniform(0.01, 1.0);
    const ReviewSelection s = select_for_review(findings, budget);
    std::vector<std::string> both;
    std::set_intersection(s.review_ids.begin(), s.review_ids.end(), s.drop_ids.begin(), s.drop_ids.end(),
                          std::back_inserter(both));
    REQUIRE(both.empty());
    const std::size_t kept = findings.size() - s.drop_ids.size();
    REQUIRE(s.review_ids.size() == static_cast<std::size_t>(std::ceil(budget * static_cast<double>(kept) - 1e-9)));
    REQUIRE(std::is_sorted(s.review_ids.begin(), s.review_ids.end()));
  }
}

TEST_CASE("anchor text cap") {
  CHECK(cap_anchor_text("abc", 2) == "ab");
  CHECK(cap_anchor_text("abc", 10) == "abc");
  // Clusters are never split.
  CHECK(cap_anchor_text("น้ำกิน", 1) == "น้ำ");
  std::string long_text;
  for (int i = 0; i < 9000; ++i) long_text += "ก่";
  const std::string capped = cap_anchor_text(long_text);
  CHECK(unicode::grapheme_count(capped) == kAnchorCap);
  CHECK(long_text.compare(0, capped.size(), capped) == 0);
}
