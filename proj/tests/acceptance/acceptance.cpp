// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any gating criterion fails; the throughput line is reported but
// never gates.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "docforge/core/image.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/curation/mixture.hpp"
#include "docforge/curation/qc.hpp"
#include "docforge/curation/resize.hpp"
#include "docforge/docmodel/canonicalize.hpp"
#include "docforge/docmodel/markup.hpp"
#include "docforge/eval/harness.hpp"
#include "docforge/eval/predictions.hpp"
#include "docforge/metrics/report.hpp"
#include "docforge/metrics/scores.hpp"
#include "docforge/metrics/tokenize.hpp"
#include "docforge/synth/augment.hpp"
#include "docforge/synth/corpus.hpp"
#include "oracles.hpp"
#include "published_tables.hpp"
#include "support.hpp"

using namespace docforge;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// ------------------------------------------------------------- criteria

Outcome metric_oracles() {
  const auto start = Clock::now();
  Rng rng(20240601);
  std::size_t edit_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_symbols(rng, 12);
    const auto b = testing::random_symbols(rng, 12);
    if (metrics::edit_distance(a, b) != testing::naive_edit_distance(a, b)) ++edit_bad;
  }
  std::size_t rouge_bad = 0;
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_symbols(rng, 10);
    const auto b = testing::random_symbols(rng, 10);
    if (metrics::rouge_l(a, b) != testing::exhaustive_rouge_l(a, b)) ++rouge_bad;
  }
  std::size_t bleu_bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto [pred, ref] = testing::related_pair(rng, 16);
    const int n = static_cast<int>(rng.between(1, 4));
    const double diff = std::fabs(metrics::bleu(pred, ref, n) - testing::direct_bleu(pred, ref, n));
    worst = std::max(worst, diff);
    if (diff > 1e-12) ++bleu_bad;
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = edit_bad == 0 && rouge_bad == 0 && bleu_bad == 0 && elapsed < 60.0;
  o.detail = "edit mismatches " + std::to_string(edit_bad) + "/1000, rouge mismatches " + std::to_string(rouge_bad) +
             "/500, bleu outside 1e-12 " + std::to_string(bleu_bad) + "/500 (max diff " + fmt("%.2e", worst) +
             "), " + fmt("%.2f s", elapsed);
  return o;
}

Outcome table_arithmetic() {
  std::size_t ok = 0;
  std::size_t total = 0;
  std::string cells;
  for (const auto& table : testing::published_tables()) {
    for (const auto& column : table.columns) {
      const auto report = metrics::aggregate_report(testing::records_for(table.metric, column.values));
      const double got = metrics::round_half_even(testing::field(report.overall, table.metric), 3);
      ++total;
      if (std::fabs(got - column.average) <= 0.0005) ++ok;
      cells += (cells.empty() ? "" : " ") + metrics::format3(got);
    }
  }
  return {ok == total && total == 12, std::to_string(ok) + "/" + std::to_string(total) + " averages match: " + cells};
}

Outcome end_to_end_identity(const synth::GenerationConfig& base) {
  testing::TempDir dir("accept-e2e");
  synth::GenerationConfig config = base;
  config.samples = 50;
  config.master_seed = 7;
  const CorpusManifest manifest = synth::generate_corpus(config, dir.path(), jobs());
  const auto preds = dir.path() / "preds";
  std::filesystem::create_directories(preds);
  for (const auto& e : manifest.entries) {
    if (e.failed()) continue;
    std::filesystem::copy_file(manifest.resolve(e.gt_path), preds / (e.id + ".pred.txt"));
  }
  const CorpusManifest loaded = eval::load_manifest(dir.path() / "manifest.jsonl");
  Outcome o{true, "50 docs, " + std::to_string(loaded.failed_count()) + " failed;"};
  if (loaded.failed_count() != 0 || loaded.entries.size() != 50) o.pass = false;
  for (eval::EvalCondition c : {eval::EvalCondition::image_only, eval::EvalCondition::with_metadata}) {
    const eval::PredictionSet set = eval::fetch_file_predictions(loaded, preds);
    const eval::EvalRun run = eval::run_eval(loaded, set, {}, c, jobs());
    const auto& overall = run.report.metrics.overall;
    const bool exact = overall.bleu == 1.0 && overall.rouge_l == 1.0 && overall.lev_norm == 0.0;
    o.pass = o.pass && exact && set.flags.empty();
    o.detail += " " + std::string(eval::to_string(c)) + " (" + fmt("%.17g, %.17g, %.17g", overall.bleu,
                                                                  overall.rouge_l, overall.lev_norm) + ")";
  }
  return o;
}

Outcome round_trip(const synth::GenerationConfig& base) {
  synth::GenerationConfig config = base;
  config.augment = false;
  config.master_seed = 101;
  std::size_t mismatches = 0;
  std::size_t diagnostics = 0;
  std::size_t failed = 0;
  std::size_t blocks = 0;
  std::string first_problem;
  for (std::size_t i = 0; i < 100; ++i) {
    const synth::GeneratedSample s = synth::generate_sample(config, i);
    if (s.entry.failed()) {
      ++failed;
      continue;
    }
    const std::string text = docmodel::serialize(s.blocks, docmodel::SupervisionMode::structure_mode);
    const docmodel::ParseResult parsed = docmodel::parse_structured(text);
    blocks += s.blocks.size();
    diagnostics += parsed.diagnostics.size();
    if (parsed.blocks != s.blocks) {
      ++mismatches;
      std::string why = "exact block comparison";
      docmodel::equivalent(parsed.blocks, s.blocks, &why);
      if (first_problem.empty()) first_problem = s.entry.id + ": " + why;
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && diagnostics == 0 && failed == 0;
  o.detail = "100 docs, " + std::to_string(blocks) + " blocks, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(diagnostics) + " diagnostics, " + std::to_string(failed) + " failed samples";
  if (!first_problem.empty()) o.detail += "; first: " + first_problem;
  return o;
}

struct DeterminismResult {
  Outcome outcome;
  double first_run_seconds = 0.0;
};

std::string corpus_digest(const std::filesystem::path& dir, const CorpusManifest& m, bool images) {
  std::string all = sha256_hex(read_text_file(dir / "manifest.jsonl"));
  for (const auto& e : m.entries) {
    if (e.failed()) continue;
    all += sha256_hex(read_text_file(dir / e.gt_path));
    if (images) all += sha256_hex(read_binary_file(dir / e.image_path));
  }
  return sha256_hex(all);
}

DeterminismResult determinism(const synth::GenerationConfig& base) {
  synth::GenerationConfig config = base;
  config.samples = 100;
  config.master_seed = 42;
  testing::TempDir a("accept-det-a");
  testing::TempDir b("accept-det-b");
  const auto start = Clock::now();
  const CorpusManifest ma = synth::generate_corpus(config, a.path(), jobs());
  const double first = seconds_since(start);
  // A different worker count must not change anything.
  const CorpusManifest mb = synth::generate_corpus(config, b.path(), jobs() == 1 ? 2 : 1);
  const std::string da = corpus_digest(a.path(), ma, false);
  const std::string db = corpus_digest(b.path(), mb, false);
  const bool images_equal = corpus_digest(a.path(), ma, true) == corpus_digest(b.path(), mb, true);
  DeterminismResult r;
  r.first_run_seconds = first;
  r.outcome.pass = da == db && images_equal && ma.entries.size() == 100;
  r.outcome.detail = "manifest+gt digest " + da.substr(0, 16) + (da == db ? " == " : " != ") + db.substr(0, 16) +
                     ", images " + (images_equal ? "identical" : "differ") + ", " +
                     std::to_string(ma.failed_count()) + " failed samples";
  return r;
}

Outcome resize_policies() {
  Rng rng(1800);
  const curation::ResizePolicy v1{curation::ResizeVariant::v1_fixed_width, 1800};
  const curation::ResizePolicy v15{curation::ResizeVariant::v15_resolution_aware, 1800};
  std::size_t bad = 0;
  std::size_t identity_checked = 0;
  std::size_t pixel_checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = static_cast<int>(rng.between(1, 4000));
    const int h = static_cast<int>(rng.between(1, 4000));
    const auto [w1, h1] = curation::resized_dimensions(w, h, v1);
    if (w1 != 1800 || std::fabs(h1 - 1800.0 * h / w) > 1.0 || h1 < 1) ++bad;
    const auto [w2, h2] = curation::resized_dimensions(w, h, v15);
    const bool keep = std::max(w, h) < 1800;
    if (keep && (w2 != w || h2 != h)) ++bad;
    if (!keep) {
      const double exact_minor = 1800.0 * std::min(w, h) / std::max(w, h);
      if (std::max(w2, h2) != 1800 || std::fabs(std::min(w2, h2) - exact_minor) > 1.0) ++bad;
    }
    // Pixels: every kept input is compared byte for byte; one in ten
    // rescaled inputs is actually resampled and its size checked.
    if (keep || i % 10 == 0) {
      Image img(w, h);
      auto bytes = img.bytes();
      for (std::size_t k = 0; k < bytes.size(); ++k) bytes[k] = static_cast<std::uint8_t>((k * 2654435761u) >> 13);
      const Image out = curation::resize_image(img, v15);
      if (keep) {
        ++identity_checked;
        if (!std::equal(out.bytes().begin(), out.bytes().end(), img.bytes().begin(), img.bytes().end())) ++bad;
      } else {
        ++pixel_checked;
        if (out.width() != w2 || out.height() != h2) ++bad;
      }
      const Image out1 = curation::resize_image(img, v1);
      if (out1.width() != 1800 || out1.height() != h1) ++bad;
    }
  }
  return {bad == 0, "1000 dimension pairs, " + std::to_string(bad) + " violations; " +
                        std::to_string(identity_checked) + " byte-identical checks, " +
                        std::to_string(pixel_checked) + " resampled rasters"};
}

Outcome mixture_exactness() {
  const std::vector<curation::MixtureComponent> weights{
      {"v1_corpus", 0.537}, {"vqa", 0.022}, {"layout_annotated", 0.064}, {"synthetic", 0.376}};
  const double raw_sum = std::accumulate(weights.begin(), weights.end(), 0.0,
                                         [](double s, const curation::MixtureComponent& c) { return s + c.weight; });
  const curation::MixtureConfig config{weights, 155403, true};
  const auto counts = curation::allocate_counts(config);
  const std::uint64_t sum = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  bool within = true;
  std::string listing;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double target = weights[i].weight / raw_sum * 155403.0;
    within = within && std::fabs(static_cast<double>(counts[i]) - target) <= 1.0;
    listing += (listing.empty() ? "" : ", ") + std::to_string(counts[i]);
  }
  const auto labels = curation::mixture_sample(config, 9);
  bool raw_rejected = false;
  try {
    (void)curation::allocate_counts({weights, 155403, false});
  } catch (const Error& e) {
    raw_rejected = e.code() == ErrorCode::InvalidWeights;
  }
  Outcome o;
  o.pass = sum == 155403 && within && labels.size() == 155403;
  o.detail = "counts {" + listing + "} sum " + std::to_string(sum) +
             fmt(", weights renormalized (published percentages sum to %.3f", raw_sum) +
             (raw_rejected ? ", rejected as-is)" : ")");
  return o;
}

/// Builds the QC corpus from the default config: a single paragraph-only
/// profile so that every page carries enough paragraphs to reverse.
synth::GenerationConfig qc_config(const synth::GenerationConfig& base) {
  synth::GenerationConfig config = base;
  config.augment = false;
  config.master_seed = 2024;
  synth::Profile p;
  p.category = "QC Paragraphs";
  p.lexicon = "thai";
  p.layout.block_mix = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  p.layout.blocks_per_page = {6, 8};
  p.layout.paragraph_words = {10, 30};
  config.profiles = {p};
  return config;
}

std::vector<std::size_t> paragraph_positions(const std::vector<docmodel::ContentBlock>& blocks) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (std::holds_alternative<docmodel::Paragraph>(blocks[i])) out.push_back(i);
  }
  return out;
}

bool has_fail(const std::vector<curation::QcFinding>& findings, curation::QcCheck check) {
  return std::any_of(findings.begin(), findings.end(), [&](const curation::QcFinding& f) {
    return f.check == check && f.severity == curation::Severity::fail;
  });
}

std::string structure(const std::vector<docmodel::ContentBlock>& blocks) {
  return docmodel::serialize(blocks, docmodel::SupervisionMode::structure_mode);
}

Outcome qc_detection(const synth::GenerationConfig& base) {
  const synth::GenerationConfig config = qc_config(base);
  std::size_t samples = 0;
  std::size_t control_fails = 0;
  std::size_t dup_hits = 0;
  std::size_t del_hits = 0;
  std::size_t rev_hits = 0;
  std::size_t rev_eligible = 0;
  double worst_ordering = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const synth::GeneratedSample s = synth::generate_sample(config, i);
    if (s.entry.failed()) continue;
    ++samples;
    const std::string raw = *s.entry.anchor_text;
    Rng rng(derive_stream_seed(s.entry.seed, 9));

    const auto control = curation::qc_check(raw, s.ground_truth);
    if (std::any_of(control.begin(), control.end(),
                    [](const curation::QcFinding& f) { return f.severity == curation::Severity::fail; })) {
      ++control_fails;
    }

    const auto paras = paragraph_positions(s.blocks);

    // Duplicate one paragraph right after itself.
    {
      auto blocks = s.blocks;
      const std::size_t at = paras[rng.below(paras.size())];
      blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(at) + 1, blocks[at]);
      if (has_fail(curation::qc_check(raw, structure(blocks)), curation::QcCheck::duplication)) ++dup_hits;
    }

    // Delete 30% of the script-aware tokens across all paragraphs; the
    // survivors are rejoined with spaces, which re-tokenizes identically.
    {
      auto blocks = s.blocks;
      std::vector<std::vector<std::string>> tokens;
      std::vector<std::pair<std::size_t, std::size_t>> where;
      for (std::size_t p = 0; p < paras.size(); ++p) {
        tokens.push_back(metrics::tokenize(std::get<docmodel::Paragraph>(blocks[paras[p]]).text));
        for (std::size_t t = 0; t < tokens.back().size(); ++t) where.emplace_back(p, t);
      }
      rng.shuffle(where);
      const auto drop = static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(where.size())));
      for (std::size_t k = 0; k < drop; ++k) tokens[where[k].first][where[k].second].clear();
      std::vector<docmodel::ContentBlock> out;
      for (std::size_t p = 0; p < paras.size(); ++p) {
        std::string text;
        for (const auto& t : tokens[p]) {
          if (t.empty()) continue;
          if (!text.empty()) text += ' ';
          text += t;
        }
        if (!text.empty()) out.push_back(docmodel::Paragraph{text});
      }
      if (has_fail(curation::qc_check(raw, structure(out)), curation::QcCheck::coverage)) ++del_hits;
    }

    // Reverse the paragraph order.
    if (paras.size() >= 5) {
      ++rev_eligible;
      auto blocks = s.blocks;
      std::vector<docmodel::ContentBlock> reversed;
      for (auto it = paras.rbegin(); it != paras.rend(); ++it) reversed.push_back(blocks[*it]);
      for (std::size_t p = 0; p < paras.size(); ++p) blocks[paras[p]] = reversed[p];
      const auto findings = curation::qc_check(raw, structure(blocks));
      for (const auto& f : findings) {
        if (f.check == curation::QcCheck::ordering) worst_ordering = std::max(worst_ordering, f.measure);
      }
      if (has_fail(findings, curation::QcCheck::ordering)) {
        ++rev_hits;
      } else {
        worst_ordering = std::max(worst_ordering, 0.6);
      }
    }
  }
  const auto rate = [](std::size_t hit, std::size_t n) { return n == 0 ? 0.0 : static_cast<double>(hit) / n; };
  Outcome o;
  o.pass = samples == 200 && control_fails == 0 && rate(dup_hits, samples) >= 0.95 &&
           rate(del_hits, samples) >= 0.95 && rev_eligible == samples && rate(rev_hits, rev_eligible) >= 0.95;
  o.detail = std::to_string(samples) + " samples; duplication " + std::to_string(dup_hits) + ", deletion " +
             std::to_string(del_hits) + ", reversal " + std::to_string(rev_hits) + "/" +
             std::to_string(rev_eligible) + fmt(" (highest ordering measure %.3f)", worst_ordering) +
             ", control fails " + std::to_string(control_fails);
  return o;
}

/// Dark-pixel centroid inside a window.
std::pair<double, double> centroid(const Image& img, int x0, int y0, int x1, int y1) {
  double sx = 0;
  double sy = 0;
  double n = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const Rgb c = img.at(x, y);
      const double darkness = 1.0 - (0.299 * c.r + 0.587 * c.g + 0.114 * c.b) / 255.0;
      if (darkness < 0.25) continue;
      sx += darkness * x;
      sy += darkness * y;
      n += darkness;
    }
  }
  return n == 0 ? std::pair{-1.0, -1.0} : std::pair{sx / n, sy / n};
}

Outcome augmentation_safety(const synth::GenerationConfig& base) {
  synth::GenerationConfig augmented = base;
  augmented.master_seed = 314;
  synth::GenerationConfig plain = augmented;
  plain.augment = false;
  std::size_t gt_diff = 0;
  std::size_t dim_diff = 0;
  std::size_t augmented_count = 0;
  std::array<std::size_t, synth::kAugOpKinds> used{};

  const double bound_pct = augmented.augmentation.ranges[4][1];
  const int w = augmented.render.page_width;
  const int h = augmented.render.page_height;
  const Rgb paper = augmented.render.paper_color;
  const int inset = 60;
  const int half = 8;
  Image markers(w, h, paper);
  const std::array<std::pair<int, int>, 4> centers{{{inset, inset}, {w - 1 - inset, inset},
                                                   {w - 1 - inset, h - 1 - inset}, {inset, h - 1 - inset}}};
  for (const auto& [cx, cy] : centers) markers.fill_rect(cx - half, cy - half, 2 * half + 1, 2 * half + 1, {0, 0, 0});
  const double tol_px = 1.0;
  double worst_x = 0;
  double worst_y = 0;
  std::size_t warp_violations = 0;

  for (std::size_t i = 0; i < 100; ++i) {
    const synth::GeneratedSample a = synth::generate_sample(augmented, i);
    const synth::GeneratedSample b = synth::generate_sample(plain, i);
    if (a.ground_truth != b.ground_truth || a.entry.failed() != b.entry.failed()) ++gt_diff;
    if (a.image.width() != b.image.width() || a.image.height() != b.image.height()) ++dim_diff;
    if (!a.augmentation.ops.empty()) ++augmented_count;
    for (const auto& op : a.augmentation.ops) ++used[op.index()];

    // Corner markers under the configured maximum warp.
    const synth::AugmentationSpec warp{{synth::PerspectiveWarp{bound_pct}}};
    const Image moved = synth::augment(markers, warp, derive_stream_seed(a.entry.seed, 3), paper);
    if (moved.width() != w || moved.height() != h) ++dim_diff;
    const int win = inset + half + static_cast<int>(std::ceil(bound_pct / 100.0 * std::max(w, h))) + 4;
    for (const auto& [cx, cy] : centers) {
      const int x0 = std::max(0, cx - win);
      const int y0 = std::max(0, cy - win);
      const auto [mx, my] = centroid(moved, x0, y0, std::min(w, cx + win + 1), std::min(h, cy + win + 1));
      const double dx = std::fabs(mx - cx);
      const double dy = std::fabs(my - cy);
      worst_x = std::max(worst_x, dx / w * 100.0);
      worst_y = std::max(worst_y, dy / h * 100.0);
      if (mx < 0 || dx > bound_pct / 100.0 * w + tol_px || dy > bound_pct / 100.0 * h + tol_px) ++warp_violations;
    }
  }
  const bool all_ops = std::all_of(used.begin(), used.end(), [](std::size_t n) { return n > 0; });
  Outcome o;
  o.pass = gt_diff == 0 && dim_diff == 0 && warp_violations == 0 && all_ops;
  o.detail = "100 samples (" + std::to_string(augmented_count) + " augmented, every op used: " +
             (all_ops ? "yes" : "no") + "), gt differences " + std::to_string(gt_diff) + ", dimension changes " +
             std::to_string(dim_diff) + fmt(", max marker shift %.3f%% x / %.3f%% y of bound %.1f%%", worst_x, worst_y,
                                            bound_pct) +
             " (" + std::to_string(warp_violations) + " violations)";
  return o;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const synth::GenerationConfig config = testing::load_config(100, 42);

  bool all_pass = true;
  auto report = [&](const std::string& name, const Outcome& o, bool gating = true) {
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (gating && !o.pass) all_pass = false;
  };
  auto guarded = [&](const std::string& name, const std::function<Outcome()>& f, bool gating = true) {
    try {
      report(name, f(), gating);
    } catch (const std::exception& e) {
      report(name, {false, std::string("exception: ") + e.what()}, gating);
    }
  };

  guarded("metric_oracles", metric_oracles);
  guarded("table_arithmetic", table_arithmetic);
  guarded("end_to_end_identity", [&] { return end_to_end_identity(config); });
  guarded("round_trip", [&] { return round_trip(config); });

  double throughput_s = -1.0;
  guarded("determinism", [&] {
    const DeterminismResult r = determinism(config);
    throughput_s = r.first_run_seconds;
    return r.outcome;
  });
  guarded("resize_policies", resize_policies);
  guarded("mixture_exactness", mixture_exactness);
  guarded("qc_detection", [&] { return qc_detection(config); });
  guarded("augmentation_safety", [&] { return augmentation_safety(config); });

  const Outcome throughput{
      throughput_s >= 0.0 && throughput_s < 300.0,
      fmt("100 augmented %.0fx%.0f pages in %.1f s", config.render.page_width, config.render.page_height,
          throughput_s) +
          " on " + std::to_string(jobs()) + " hardware thread(s), bound 300 s (soft, not gating)"};
  report("throughput", throughput, false);

  std::printf("acceptance finished in %.1f s\n", seconds_since(start));
  return all_pass ? 0 : 1;
}
