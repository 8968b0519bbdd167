#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "docforge/core/image.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/core/unicode.hpp"
#include "docforge/docmodel/markup.hpp"
#include "docforge/synth/assets.hpp"
#include "docforge/synth/augment.hpp"
#include "docforge/synth/config.hpp"
#include "docforge/synth/corpus.hpp"
#include "docforge/synth/font.hpp"
#include "docforge/synth/layout.hpp"
#include "docforge/synth/lexicon.hpp"
#include "docforge/synth/raster.hpp"
#include "docforge/synth/text.hpp"
#include "support.hpp"

using namespace docforge;
using namespace docforge::synth;
using docforge::testing::code_of;
using docforge::testing::data_dir;

namespace {

std::filesystem::path font_path(const char* name) { return data_dir() / "fonts" / name; }

RenderSpec sarabun_spec() {
  RenderSpec spec;
  spec.font_paths = {font_path("Sarabun-Regular.ttf")};
  spec.equation_font_path = font_path("DejaVuSansMono.ttf");
  return spec;
}

const AssetPool& bundled_pool() {
  static const AssetPool pool = load_asset_pool(data_dir() / "assets" / "pool.json");
  return pool;
}

const Lexicon& thai_lexicon() {
  static const Lexicon lex = load_lexicon(data_dir() / "lexicons" / "thai_common.txt");
  return lex;
}

LayoutSpec only(docmodel::BlockKind kind) {
  LayoutSpec spec;
  spec.block_mix.fill(0.0);
  spec.block_mix[static_cast<std::size_t>(kind)] = 1.0;
  return spec;
}

AssetPool chart_pool(std::size_t n) {
  AssetPool pool;
  for (std::size_t i = 0; i < n; ++i) {
    pool.images.push_back({"c" + std::to_string(i) + ".png", "chart " + std::to_string(i), AssetKind::chart, nullptr});
  }
  return pool;
}

std::size_t count_changed(const Image& a, const Image& b) {
  std::size_t n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) n += a.at(x, y) == b.at(x, y) ? 0 : 1;
  }
  return n;
}

}  // namespace

TEST_CASE("lexicon validation") {
  CHECK(make_lexicon({"กข", "คง"}).script_tag == ScriptTag::thai);
  CHECK(make_lexicon({"ab"}).script_tag == ScriptTag::latin);
  CHECK(make_lexicon({"ab", "กข"}).script_tag == ScriptTag::mixed);
  CHECK(code_of([] { (void)make_lexicon({}); }) == ErrorCode::EmptyLexicon);
  CHECK(code_of([] { (void)make_lexicon({"a b"}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { (void)make_lexicon({""}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { (void)make_lexicon({"é"}); }) == ErrorCode::InvalidSpec);
  CHECK(thai_lexicon().entries.size() >= 1000);
  CHECK(thai_lexicon().script_tag == ScriptTag::thai);
}

TEST_CASE("sample_vocab examples") {
  const Lexicon one = make_lexicon({"กข"});
  CHECK(sample_vocab(one, 3, 99) == std::vector<std::string>{"กข", "กข", "กข"});
  CHECK(sample_vocab(thai_lexicon(), 50, 7) == sample_vocab(thai_lexicon(), 50, 7));
  CHECK(sample_vocab(thai_lexicon(), 50, 7) != sample_vocab(thai_lexicon(), 50, 8));
}

TEST_CASE("sample_vocab is uniform") {
  std::vector<std::string> words;
  for (int i = 0; i < 10; ++i) words.push_back("w" + std::to_string(i));
  const Lexicon lex = make_lexicon(words);
  std::map<std::string, int> freq;
  for (const auto& w : sample_vocab(lex, 10000, 2024)) ++freq[w];
  const double sigma = std::sqrt(10000 * 0.1 * 0.9);
  REQUIRE(freq.size() == 10);
  for (const auto& [w, n] : freq) {
    CAPTURE(w);
    CHECK(std::fabs(n - 1000.0) <= 3 * sigma);
  }
}

TEST_CASE("font metrics") {
  const auto sarabun = Font::load(font_path("Sarabun-Regular.ttf"));
  CHECK(sarabun->units_per_em() == 1000);
  CHECK(sarabun->ascent_units() == 1068);
  CHECK(sarabun->descent_units() == -232);
  CHECK(sarabun->advance_units(U'น') == 637);
  CHECK(sarabun->advance_units(U'้') == 0);
  CHECK(sarabun->advance_units(U'ำ') == 485);
  CHECK(sarabun->advance_units(U'A') == 596);
  // Two spacing glyphs; the tone mark adds nothing.
  CHECK(sarabun->text_width("น้ำ", 1000.0) == doctest::Approx(637 + 485));
  CHECK(sarabun->covers(U'่'));

  const auto mono = Font::load(font_path("DejaVuSansMono.ttf"));
  CHECK(mono->units_per_em() == 2048);
  CHECK(mono->advance_units(U'A') == 1233);
  CHECK_FALSE(mono->covers(U'่'));
  CHECK(mono->first_uncovered("ab่") == U'่');
  CHECK(Font::load(font_path("DejaVuSansMono.ttf")) == mono);

  CHECK(code_of([] { (void)Font::load("/nonexistent/font.ttf"); }) == ErrorCode::IoFailure);
  CHECK(code_of([] { (void)Font::load(data_dir() / "fonts" / "OFL-Sarabun.txt"); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("render_text_block examples") {
  RenderSpec mono;
  mono.font_paths = {font_path("DejaVuSansMono.ttf")};
  mono.min_pt = mono.max_pt = 12;
  const RenderedText a = render_text_block("A", mono, 200, 1);
  CHECK(a.lines == std::vector<std::string>{"A"});
  CHECK(a.height_px == static_cast<int>(std::ceil(12 * mono.line_spacing)));
  CHECK(a.raster.width() == 200);
  CHECK(a.raster.height() == a.height_px);
  CHECK(a.size_pt == 12);
  CHECK(mean_luminance(a.raster) < mean_luminance(Image(200, a.height_px, mono.paper_color)));

  CHECK(code_of([&] { (void)render_text_block("ก่", mono, 200, 1); }) == ErrorCode::NoGlyphCoverage);
  CHECK(code_of([&] { (void)render_text_block("W", mono, 3, 1); }) == ErrorCode::TextTooWide);
  CHECK(code_of([&] { (void)render_text_block("", mono, 200, 1); }) == ErrorCode::PreconditionFailed);
  CHECK(code_of([&] { (void)render_text_block("A", mono, 5000, 1); }) == ErrorCode::PreconditionFailed);

  const RenderSpec thai = sarabun_spec();
  const RenderedText t1 = render_text_block("น้ำ ผู้ใหญ่ กิน ข้าว", thai, 400, 5);
  const RenderedText t2 = render_text_block("น้ำ ผู้ใหญ่ กิน ข้าว", thai, 400, 5);
  CHECK(t1.raster == t2.raster);
  CHECK(t1.size_pt >= thai.min_pt);
  CHECK(t1.size_pt <= thai.max_pt);
}

TEST_CASE("layout_text wraps between clusters") {
  TextStyle style{Font::load(font_path("Sarabun-Regular.ttf")), 20.0, 1.5, {0, 0, 0}};
  const TextLayout wide = layout_text("กิน ข้าว", style, 1000);
  CHECK(wide.lines == std::vector<std::string>{"กิน ข้าว"});
  const TextLayout narrow = layout_text("กินข้าว", style, 30);
  CHECK(narrow.lines.size() > 1);
  std::string joined;
  for (const auto& l : narrow.lines) joined += l;
  CHECK(joined == "กินข้าว");
  for (const auto& l : narrow.lines) {
    CHECK(style.font->text_width(l, style.size_px) <= 30.0);
    // No line starts with a combining mark.
    CHECK(unicode::decode_utf8(l).front() != U'้');
  }
  CHECK(layout_text("a\nb", style, 1000).lines.size() == 2);
  CHECK(wide.height == style.line_height());
}

TEST_CASE("sample_asset examples") {
  const AssetPool one = chart_pool(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(sample_asset(one, AssetKind::chart, seed).payload == "chart 0");
  }
  const AssetPool hundred = chart_pool(100);
  CHECK(sample_asset(hundred, AssetKind::chart, 1000).index == 41);
  CHECK(sample_asset(hundred, AssetKind::chart, 1001).index == 50);
  CHECK(sample_asset(hundred, AssetKind::chart, 1000).payload == "chart 41");
  CHECK(code_of([&] { (void)sample_asset(hundred, AssetKind::equation, 1); }) == ErrorCode::EmptyPoolForKind);
  CHECK(code_of([&] { (void)sample_asset(hundred, AssetKind::photo, 1); }) == ErrorCode::EmptyPoolForKind);

  const AssetPool& pool = bundled_pool();
  CHECK(count_of(pool, AssetKind::equation) == 25);
  CHECK(count_of(pool, AssetKind::photo) > 0);
  CHECK(count_of(pool, AssetKind::chart) > 0);
  const SampledAsset eq = sample_asset(pool, AssetKind::equation, 3);
  CHECK_FALSE(eq.payload.empty());
  CHECK(eq.raster == nullptr);
  const SampledAsset photo = sample_asset(pool, AssetKind::photo, 3);
  REQUIRE(photo.raster != nullptr);
  CHECK_FALSE(photo.raster->empty());
}

TEST_CASE("compose_layout examples") {
  LayoutSpec para = only(docmodel::BlockKind::paragraph);
  para.blocks_per_page = {1, 1};
  const PagePlan p = compose_layout(para, thai_lexicon(), bundled_pool(), sarabun_spec(), 5);
  REQUIRE(p.blocks.size() == 1);
  CHECK(docmodel::kind_of(p.blocks[0].block) == docmodel::BlockKind::paragraph);
  CHECK(check_plan(p));

  LayoutSpec table = only(docmodel::BlockKind::table);
  table.table_rows = {3, 3};
  table.table_cols = {3, 3};
  table.span_probability = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PagePlan t = compose_layout(table, thai_lexicon(), bundled_pool(), sarabun_spec(), seed);
    REQUIRE_FALSE(t.blocks.empty());
    for (const auto& b : t.blocks) {
      const auto grid = docmodel::expand_table(std::get<docmodel::Table>(b.block));
      CHECK(grid.size() == 3);
      CHECK(grid[0].size() == 3);
    }
  }

  const PagePlan again = compose_layout(para, thai_lexicon(), bundled_pool(), sarabun_spec(), 5);
  CHECK(again.blocks[0].block == p.blocks[0].block);
  CHECK(again.blocks[0].box == p.blocks[0].box);

  LayoutSpec bad = para;
  bad.columns = 3;
  CHECK(code_of([&] { (void)compose_layout(bad, thai_lexicon(), bundled_pool(), sarabun_spec(), 1); }) ==
        ErrorCode::InvalidSpec);
  bad = para;
  bad.block_mix.fill(0.0);
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidSpec);
  bad = table;
  bad.table_rows = {1, 3};
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidSpec);
  bad = para;
  bad.paragraph_words = {5, 2};
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidSpec);

  // A 600 px page with huge type leaves no room for a 6 column table.
  RenderSpec tight = sarabun_spec();
  tight.page_width = tight.page_height = 600;
  tight.margin_px = 200;
  tight.min_pt = tight.max_pt = 40;
  LayoutSpec big = only(docmodel::BlockKind::table);
  big.table_cols = {6, 6};
  big.table_rows = {8, 8};
  big.blocks_per_page = {1, 1};
  CHECK(code_of([&] { (void)compose_layout(big, thai_lexicon(), bundled_pool(), tight, 1); }) ==
        ErrorCode::LayoutInfeasible);
}

TEST_CASE("property: composed plans never overlap") {
  const RenderSpec spec = sarabun_spec();
  LayoutSpec two = LayoutSpec{};
  two.columns = 2;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const LayoutSpec& layout = seed % 2 == 0 ? LayoutSpec{} : two;
    const PagePlan plan = compose_layout(layout, thai_lexicon(), bundled_pool(), spec, seed);
    std::string why;
    REQUIRE_MESSAGE(check_plan(plan, &why), why);
    const int content_right = plan.page_width - plan.margin_px;
    const int content_bottom = plan.page_height - plan.margin_px;
    for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
      const Box& a = plan.blocks[i].box;
      REQUIRE(a.x >= plan.margin_px);
      REQUIRE(a.y >= plan.margin_px);
      REQUIRE(a.right() <= content_right);
      REQUIRE(a.bottom() <= content_bottom);
      for (std::size_t j = i + 1; j < plan.blocks.size(); ++j) {
        if (plan.blocks[j].column != plan.blocks[i].column) continue;
        REQUIRE_FALSE(overlaps(a, plan.blocks[j].box));
      }
    }
  }
}

TEST_CASE("rasterize_page examples") {
  const Lexicon word = make_lexicon({"ทดสอบ"});
  LayoutSpec para = only(docmodel::BlockKind::paragraph);
  para.blocks_per_page = {1, 1};
  para.paragraph_words = {1, 1};
  const RenderSpec spec = sarabun_spec();
  const PagePlan plan = compose_layout(para, word, bundled_pool(), spec, 1);
  std::vector<std::string> log;
  const RasterizedPage page = rasterize_page(plan, spec, &log);
  CHECK(page.tree.blocks().size() == 1);
  CHECK(page.tree.blocks()[0] == docmodel::ContentBlock{docmodel::Paragraph{"ทดสอบ"}});
  CHECK(docmodel::serialize(page.tree, docmodel::SupervisionMode::structure_mode) == "ทดสอบ");
  CHECK(page.image.width() == spec.page_width);
  CHECK(page.image.height() == spec.page_height);
  CHECK(page.image.at(0, 0) == spec.paper_color);
  CHECK(std::find(log.begin(), log.end(), "text:ทดสอบ") != log.end());

  // Every cell string reaches the renderer verbatim.
  LayoutSpec table = only(docmodel::BlockKind::table);
  table.table_rows = {3, 3};
  table.table_cols = {3, 3};
  table.span_probability = 0.0;
  table.blocks_per_page = {1, 1};
  const PagePlan tplan = compose_layout(table, thai_lexicon(), bundled_pool(), spec, 11);
  std::vector<std::string> tlog;
  const RasterizedPage tpage = rasterize_page(tplan, spec, &tlog);
  REQUIRE(tpage.tree.blocks().size() == 1);
  const auto grid = docmodel::expand_table(std::get<docmodel::Table>(tpage.tree.blocks()[0]));
  REQUIRE(grid.size() == 3);
  for (const auto& row : grid) {
    for (const auto& cell : row) {
      if (cell.empty()) continue;
      CHECK(std::find(tlog.begin(), tlog.end(), "cell:" + cell) != tlog.end());
    }
  }
  CHECK(tpage.tree.blocks()[0] == tplan.blocks[0].block);
}

TEST_CASE("illumination darkens a text page") {
  LayoutSpec para = only(docmodel::BlockKind::paragraph);
  const RenderSpec spec = sarabun_spec();
  const PagePlan plan = compose_layout(para, thai_lexicon(), bundled_pool(), spec, 3);
  const Image page = rasterize_page(plan, spec).image;
  const Image lit = augment(page, {{IlluminationGradient{0.3}}}, 9, spec.paper_color);
  CHECK(mean_luminance(page) > mean_luminance(lit));
}

TEST_CASE("augment examples") {
  Image img(64, 48, {200, 180, 160});
  for (int x = 10; x < 50; ++x) img.set(x, 20, {0, 0, 0});
  CHECK(augment(img, {}, 1) == img);

  Plane impulse{21, 21, std::vector<float>(21 * 21, 0.0f)};
  impulse.at(10, 10) = 1.0f;
  const Plane blurred = gaussian_blur(impulse, 1.0);
  double mass = 0.0;
  for (float v : blurred.values) mass += v;
  CHECK(std::fabs(mass - 1.0) <= 1e-3);
  for (int dy = -5; dy <= 5; ++dy) {
    for (int dx = -5; dx <= 5; ++dx) {
      const float v = blurred.at(10 + dx, 10 + dy);
      CHECK(v == doctest::Approx(blurred.at(10 - dx, 10 + dy)).epsilon(1e-6));
      CHECK(v == doctest::Approx(blurred.at(10 + dx, 10 - dy)).epsilon(1e-6));
      CHECK(v == doctest::Approx(blurred.at(10 + dy, 10 + dx)).epsilon(1e-6));
    }
  }
  CHECK(blurred.at(10, 10) > blurred.at(11, 10));

  const Image grey(1000, 1000, {128, 128, 128});
  const Image speckled = augment(grey, {{SaltPepper{0.5}}}, 77);
  const double expected = 1e6 * 0.005;
  const double sigma = std::sqrt(1e6 * 0.005 * 0.995);
  const auto flipped = static_cast<double>(count_changed(grey, speckled));
  CHECK(std::fabs(flipped - expected) <= 3 * sigma);

  const AugmentationSpec all{{PerspectiveWarp{2.0}, IlluminationGradient{0.2}, GaussianBlur{1.0}, AdditiveNoise{8.0}}};
  const Image a = augment(img, all, 5);
  CHECK(a.width() == img.width());
  CHECK(a.height() == img.height());
  CHECK(augment(img, all, 5) == a);
  CHECK(augment(img, all, 6) != a);

  CHECK(code_of([] { validate(AugmentationSpec{{GaussianBlur{2.0}}}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { validate(AugmentationSpec{{SaltPepper{0.6}}}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] {
          validate(AugmentationSpec{{GaussianBlur{1.0}, GaussianBlur{1.0}, GaussianBlur{1.0}, GaussianBlur{1.0},
                                     GaussianBlur{1.0}}});
        }) == ErrorCode::InvalidSpec);
  CHECK(op_name(AugOp{PerspectiveWarp{}}) == "perspective_warp");
}

TEST_CASE("property: warp corners stay within the bound") {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const double p = rng.uniform(0.0, 2.0);
    const int w = static_cast<int>(rng.between(600, 2000));
    const int h = static_cast<int>(rng.between(600, 2000));
    const auto corners = warp_corners(PerspectiveWarp{p}, w, h, rng.next(), rng.below(4));
    const std::array<std::array<double, 2>, 4> src{{{0, 0}, {double(w), 0}, {double(w), double(h)}, {0, double(h)}}};
    for (std::size_t c = 0; c < 4; ++c) {
      REQUIRE(std::fabs(corners[c][0] - src[c][0]) <= p / 100.0 * w + 1e-9);
      REQUIRE(std::fabs(corners[c][1] - src[c][1]) <= p / 100.0 * h + 1e-9);
    }
  }
}

TEST_CASE("sample_augmentation respects the policy") {
  AugmentationPolicy policy;
  std::set<std::size_t> seen_sizes;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const AugmentationSpec spec = sample_augmentation(policy, seed);
    validate(spec);
    REQUIRE_FALSE(spec.ops.empty());
    REQUIRE(spec.ops.size() <= 4);
    seen_sizes.insert(spec.ops.size());
    std::set<std::size_t> kinds;
    for (const auto& op : spec.ops) kinds.insert(op.index());
    REQUIRE(kinds.size() == spec.ops.size());
  }
  CHECK(seen_sizes == std::set<std::size_t>{1, 2, 3, 4});

  policy.fraction = 0.0;
  CHECK(sample_augmentation(policy, 1).ops.empty());
  policy.fraction = 1.0;
  policy.enabled = {0};
  CHECK(sample_augmentation(policy, 1).ops.size() == 1);

  AugmentationPolicy bad;
  bad.max_ops = 5;
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidSpec);
  bad = {};
  bad.ranges[0] = {0.1, 1.0};
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("generate_sample pairs ground truth with render inputs") {
  const GenerationConfig config = testing::load_config(12, 42);
  for (std::size_t i = 0; i < config.samples; ++i) {
    const GeneratedSample s = generate_sample(config, i, true);
    REQUIRE_FALSE(s.entry.failed());
    const auto parsed = docmodel::parse_structured(s.ground_truth);
    REQUIRE(parsed.diagnostics.empty());
    auto logged = [&](const std::string& entry) {
      return std::find(s.render_log.begin(), s.render_log.end(), entry) != s.render_log.end();
    };
    for (const auto& block : parsed.blocks) {
      if (const auto* t = std::get_if<docmodel::Table>(&block)) {
        for (const auto& row : t->rows) {
          for (const auto& cell : row) {
            if (!cell.text.empty()) CHECK(logged("cell:" + cell.text));
          }
        }
      } else if (const auto* f = std::get_if<docmodel::Figure>(&block)) {
        CHECK(logged("figure:" + f->description));
      } else if (const auto* e = std::get_if<docmodel::Equation>(&block)) {
        CHECK(logged("equation:" + e->source));
      }
    }
    CHECK(s.entry.id == sample_id(i));
    CHECK(s.entry.seed == derive_sample_seed(42, i));
    CHECK(s.image.width() == config.render.page_width);
  }
}

TEST_CASE("augmentation leaves ground truth untouched") {
  GenerationConfig config = testing::load_config(6, 9);
  GenerationConfig plain = config;
  plain.augment = false;
  for (std::size_t i = 0; i < config.samples; ++i) {
    const GeneratedSample a = generate_sample(config, i);
    const GeneratedSample b = generate_sample(plain, i);
    CHECK(a.ground_truth == b.ground_truth);
    CHECK(a.entry.category == b.entry.category);
    CHECK(a.image.width() == b.image.width());
    CHECK(a.image.height() == b.image.height());
  }
}

TEST_CASE("generate_corpus writes a reproducible corpus") {
  CHECK(sample_id(0) == "syn-000001");
  CHECK(sample_id(41) == "syn-000042");

  const GenerationConfig config = testing::load_config(3, 42);
  testing::TempDir one("corpus-a");
  testing::TempDir two("corpus-b");
  const CorpusManifest m1 = generate_corpus(config, one.path(), 2);
  const CorpusManifest m2 = generate_corpus(config, two.path(), 1);
  REQUIRE(m1.entries.size() == 3);
  CHECK(m1.failed_count() == 0);
  CHECK(read_text_file(one.path() / "manifest.jsonl") == read_text_file(two.path() / "manifest.jsonl"));
  for (const auto& e : m1.entries) {
    CHECK(read_text_file(one.path() / e.gt_path) == read_text_file(two.path() / e.gt_path));
    const Image img = decode_png(read_binary_file(one.path() / e.image_path));
    CHECK(img.width() == 1240);
    CHECK(img.height() == 1754);
    CHECK(e.config_fingerprint == config.fingerprint);
    CHECK(e.anchor_text.has_value());
  }

  GenerationConfig empty = config;
  empty.samples = 0;
  testing::TempDir three("corpus-c");
  CHECK(code_of([&] { (void)generate_corpus(empty, three.path(), 1); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("generation config parsing") {
  const GenerationConfig c = testing::load_config(5, 7);
  CHECK(c.samples == 5);
  CHECK(c.master_seed == 7);
  CHECK(c.profiles.size() == 4);
  CHECK(c.fingerprint.size() == 64);
  CHECK(testing::load_config(5, 8).fingerprint != c.fingerprint);
  CHECK(testing::load_config(5, 7).fingerprint == c.fingerprint);

  const std::string text = read_text_file(testing::default_config_path());
  const auto base = testing::default_config_path().parent_path();
  auto with = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    const auto at = t.find(from);
    REQUIRE(at != std::string::npos);
    t.replace(at, from.size(), to);
    return t;
  };
  CHECK(code_of([&] { (void)parse_generation_config(with("\"samples\"", "\"sample_count\""), base); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { (void)parse_generation_config(with("Sarabun-Regular.ttf", "Missing.ttf"), base); }) ==
        ErrorCode::IoFailure);
  CHECK(code_of([&] { (void)parse_generation_config(with("\"max_ops\": 4", "\"max_ops\": 6"), base); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { (void)parse_generation_config("{", base); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { (void)parse_generation_config(with("\"Academic Papers\"", "\"Thai Books\""), base); }) ==
        ErrorCode::InvalidConfig);
}
