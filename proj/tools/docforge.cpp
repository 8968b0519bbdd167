#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/curation/mixture.hpp"
#include "docforge/curation/qc.hpp"
#include "docforge/curation/resize.hpp"
#include "docforge/docmodel/document.hpp"
#include "docforge/docmodel/markup.hpp"
#include "docforge/eval/harness.hpp"
#include "docforge/eval/predictions.hpp"
#include "docforge/synth/corpus.hpp"

namespace fs = std::filesystem;
using namespace docforge;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 0;
};

fs::path out_dir(const GlobalOptions& g, const char* fallback) {
  fs::path dir = g.out.empty() ? fs::path(fallback) : fs::path(g.out);
  fs::create_directories(dir);
  return dir;
}

int run_generate(const GlobalOptions& g, std::optional<std::size_t> samples, bool no_augment) {
  if (g.config.empty()) throw Error(ErrorCode::InvalidConfig, "generate needs --config");
  auto config = synth::load_generation_config(g.config, {g.seed, samples});
  if (no_augment) config.augment = false;
  const fs::path out = out_dir(g, "corpus");
  const auto start = std::chrono::steady_clock::now();
  const CorpusManifest manifest = synth::generate_corpus(config, out, g.jobs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "generated " << manifest.entries.size() - manifest.failed_count() << " of " << manifest.entries.size()
            << " samples in " << secs << " s -> " << (out / "manifest.jsonl").string() << "\n";
  for (const auto& e : manifest.entries) {
    if (e.failed()) std::cerr << e.id << " failed: " << e.error << "\n";
  }
  std::cout << "config fingerprint " << manifest.config_fingerprint << "\n";
  return 0;
}

struct QcOptions {
  std::string manifest;
  std::string annotations;
  std::string raw;
  std::optional<double> budget;
};

int run_qc(const GlobalOptions& g, const QcOptions& o) {
  curation::QcThresholds thresholds;
  double budget = 0.1;
  if (!g.config.empty()) {
    const auto doc = nlohmann::json::parse(read_text_file(g.config));
    if (doc.contains("qc")) {
      const auto& qc = doc.at("qc");
      thresholds.coverage_fail = qc.value("coverage_fail", thresholds.coverage_fail);
      thresholds.coverage_warn = qc.value("coverage_warn", thresholds.coverage_warn);
      thresholds.ordering_fail = qc.value("ordering_fail", thresholds.ordering_fail);
      thresholds.length_warn = qc.value("length_warn", thresholds.length_warn);
      budget = qc.value("review_budget", budget);
    }
  }
  if (o.budget) budget = *o.budget;
  if (!(budget > 0.0 && budget <= 1.0)) throw Error(ErrorCode::InvalidConfig, "review budget outside (0, 1]");

  const CorpusManifest manifest = eval::load_manifest(o.manifest);
  std::map<std::string, std::vector<curation::QcFinding>> findings;
  std::string lines;
  for (const auto& e : manifest.entries) {
    if (e.failed()) continue;
    const std::string annotation = o.annotations.empty() ? read_text_file(manifest.resolve(e.gt_path))
                                                          : read_text_file(fs::path(o.annotations) / (e.id + ".ann.txt"));
    std::string raw;
    if (!o.raw.empty()) {
      raw = read_text_file(fs::path(o.raw) / (e.id + ".raw.txt"));
    } else if (e.anchor_text) {
      raw = *e.anchor_text;
    } else {
      throw Error(ErrorCode::PreconditionFailed, "sample " + e.id + " has no anchor text; pass --raw");
    }
    auto& list = findings[e.id];
    list = curation::qc_check(raw, annotation, thresholds, e.id);
    for (const auto& f : list) {
      nlohmann::ordered_json j{{"sample_id", f.sample_id},
                               {"check", curation::to_string(f.check)},
                               {"severity", curation::to_string(f.severity)},
                               {"measure", f.measure},
                               {"detail", f.detail}};
      lines += j.dump() + "\n";
    }
  }
  const auto selection = curation::select_for_review(findings, budget);
  const fs::path out = out_dir(g, "qc");
  write_text_file(out / "qc.jsonl", lines);
  std::string review;
  for (const auto& id : selection.review_ids) review += id + "\n";
  std::string drop;
  for (const auto& id : selection.drop_ids) drop += id + "\n";
  write_text_file(out / "review.txt", review);
  write_text_file(out / "drop.txt", drop);
  std::cout << findings.size() << " samples checked, " << selection.drop_ids.size() << " dropped, "
            << selection.review_ids.size() << " selected for review -> " << out.string() << "\n";
  return 0;
}

struct EvalOptions {
  std::string manifest;
  std::string predictions;
  std::string condition = "image_only";
  std::string tokenization = "script_aware";
  eval::EndpointConfig endpoint;
  std::string prompts;
};

void write_reports(const fs::path& out, const eval::EvalReport& report) {
  write_text_file(out / "report.md", eval::render_report(report, eval::ReportFormat::markdown));
  write_text_file(out / "report.json", eval::render_report(report, eval::ReportFormat::json));
}

int run_eval(const GlobalOptions& g, const EvalOptions& o) {
  if (o.predictions.empty() == o.endpoint.url.empty()) {
    throw Error(ErrorCode::InvalidConfig, "give exactly one of --predictions and --endpoint");
  }
  const auto condition = eval::condition_from_string(o.condition);
  const auto policy = metrics::policy_from_string(o.tokenization);
  const CorpusManifest manifest = eval::load_manifest(o.manifest);
  eval::PredictionSet predictions;
  if (!o.predictions.empty()) {
    predictions = eval::fetch_file_predictions(manifest, o.predictions);
  } else {
    const fs::path prompts = o.prompts.empty() ? fs::path(DOCFORGE_DATA_DIR) / "prompts" : fs::path(o.prompts);
    predictions = eval::fetch_endpoint_predictions(manifest, o.endpoint, eval::load_prompts(prompts), condition);
  }
  const eval::EvalRun run = eval::run_eval(manifest, predictions, policy, condition, g.jobs);
  const fs::path out = out_dir(g, "eval");
  write_text_file(out / "scores.jsonl", eval::scores_to_jsonl(run.records));
  write_reports(out, run.report);
  std::cout << eval::render_report(run.report, eval::ReportFormat::markdown);
  return 0;
}

struct ReportOptions {
  std::string scores;
  std::string json;
  std::string condition = "image_only";
  std::string tokenization = "script_aware";
  std::string fingerprint;
};

int run_report(const GlobalOptions& g, const ReportOptions& o) {
  eval::EvalReport report;
  if (!o.json.empty()) {
    report = eval::report_from_json(read_text_file(o.json));
  } else if (!o.scores.empty()) {
    const auto records = eval::scores_from_jsonl(read_text_file(o.scores));
    report.metrics = metrics::aggregate_report(records, metrics::policy_from_string(o.tokenization));
    report.context.condition = o.condition;
    report.context.config_fingerprint = o.fingerprint;
    report.context.scored = records.size();
  } else {
    throw Error(ErrorCode::InvalidConfig, "report needs --scores or --from-json");
  }
  if (!g.out.empty()) write_reports(out_dir(g, "report"), report);
  std::cout << eval::render_report(report, eval::ReportFormat::markdown);
  return 0;
}

int run_resize(const std::string& variant, int target, const std::string& in, const std::string& out) {
  const curation::ResizePolicy policy{curation::resize_variant_from_string(variant), target};
  const Image image = read_png(in);
  const Image resized = curation::resize_image(image, policy);
  write_png(resized, out);
  std::cout << image.width() << "x" << image.height() << " -> " << resized.width() << "x" << resized.height() << "\n";
  return 0;
}

int run_mixture(const GlobalOptions& g, const std::vector<std::string>& specs, std::uint64_t total, bool renormalize,
                bool labels) {
  curation::MixtureConfig config;
  config.total_samples = total;
  config.renormalize = renormalize;
  for (const auto& s : specs) {
    const auto eq = s.rfind('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "component must be label=weight: " + s);
    config.components.push_back({s.substr(0, eq), std::stod(s.substr(eq + 1))});
  }
  const auto counts = curation::allocate_counts(config);
  for (std::size_t i = 0; i < counts.size(); ++i) std::cout << config.components[i].label << "\t" << counts[i] << "\n";
  if (labels) {
    std::string text;
    for (const auto& l : curation::mixture_sample(config, g.seed.value_or(0))) text += l + "\n";
    const fs::path out = out_dir(g, "mixture");
    write_text_file(out / "labels.txt", text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic Thai/English document corpora and OCR evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config, "Configuration file (JSON)");
  app.add_option("--seed", g.seed, "Master seed override");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads (0: all cores)");

  auto* gen = app.add_subcommand("generate", "Render a synthetic corpus");
  std::optional<std::size_t> samples;
  bool no_augment = false;
  gen->add_option("--samples", samples, "Sample count override");
  gen->add_flag("--no-augment", no_augment, "Skip acquisition-artifact augmentation");

  auto* qc = app.add_subcommand("qc", "Quality checks and review selection");
  QcOptions qo;
  qc->add_option("--manifest", qo.manifest, "Corpus manifest.jsonl")->required();
  qc->add_option("--annotations", qo.annotations, "Directory of <id>.ann.txt (default: the ground truth files)");
  qc->add_option("--raw", qo.raw, "Directory of <id>.raw.txt (default: manifest anchor text)");
  qc->add_option("--budget", qo.budget, "Share of kept samples sent to review");

  auto* ev = app.add_subcommand("eval", "Score predictions against a manifest");
  EvalOptions eo;
  ev->add_option("--manifest", eo.manifest, "Corpus manifest.jsonl")->required();
  ev->add_option("--predictions", eo.predictions, "Directory of <id>.pred.txt");
  ev->add_option("--endpoint", eo.endpoint.url, "Model endpoint URL");
  ev->add_option("--model", eo.endpoint.model, "Model name sent to the endpoint");
  ev->add_option("--token-env", eo.endpoint.token_env, "Environment variable holding the bearer token");
  ev->add_option("--timeout", eo.endpoint.timeout_s, "Request timeout in seconds");
  ev->add_option("--retries", eo.endpoint.retries, "Retries for transient failures");
  ev->add_option("--window", eo.endpoint.window, "Requests in flight");
  ev->add_option("--prompts", eo.prompts, "Directory with default.txt and structure.txt");
  ev->add_option("--condition", eo.condition, "image_only or with_metadata");
  ev->add_option("--tokenization", eo.tokenization, "script_aware, whitespace or grapheme, optionally +lowercase");

  auto* rep = app.add_subcommand("report", "Re-render a report");
  ReportOptions ro;
  rep->add_option("--scores", ro.scores, "scores.jsonl");
  rep->add_option("--from-json", ro.json, "report.json");
  rep->add_option("--condition", ro.condition, "Condition label for --scores");
  rep->add_option("--tokenization", ro.tokenization, "Tokenization label for --scores");
  rep->add_option("--fingerprint", ro.fingerprint, "Config fingerprint for --scores");

  auto* rs = app.add_subcommand("resize", "Apply a resolution policy to a PNG");
  std::string variant = "v1.5";
  int target = 1800;
  std::string in_png;
  std::string out_png;
  rs->add_option("--policy", variant, "v1 or v1.5");
  rs->add_option("--target", target, "Target size in pixels");
  rs->add_option("input", in_png)->required();
  rs->add_option("output", out_png)->required();

  auto* mx = app.add_subcommand("mixture", "Largest-remainder corpus mixture");
  std::vector<std::string> components;
  std::uint64_t total = 0;
  bool renormalize = false;
  bool labels = false;
  mx->add_option("--component", components, "label=weight")->required();
  mx->add_option("--total", total, "Total samples")->required();
  mx->add_flag("--renormalize", renormalize, "Divide weights by their sum first");
  mx->add_flag("--labels", labels, "Write the shuffled label sequence to <out>/labels.txt");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return run_generate(g, samples, no_augment);
    if (*qc) return run_qc(g, qo);
    if (*ev) return run_eval(g, eo);
    if (*rep) return run_report(g, ro);
    if (*rs) return run_resize(variant, target, in_png, out_png);
    if (*mx) return run_mixture(g, components, total, renormalize, labels);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
