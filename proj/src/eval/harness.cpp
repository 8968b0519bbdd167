#include "docforge/eval/harness.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/docmodel/canonicalize.hpp"
#include "docforge/metrics/scores.hpp"

namespace docforge::eval {

namespace {

using nlohmann::json;

constexpr std::string_view kBleuMethod =
    "sentence BLEU up to 4-grams, add-one smoothing on orders n >= 2 without a match, brevity penalty";
constexpr std::string_view kLevenshteinMethod = "grapheme clusters, divided by the longer side";

metrics::MetricTriple triple_from(const json& j) {
  return {j.at("bleu").get<double>(), j.at("rouge_l").get<double>(), j.at("lev_norm").get<double>()};
}

std::string row(std::string_view label, const metrics::MetricTriple& t) {
  return "| " + std::string(label) + " | " + metrics::format3(t.bleu) + " | " + metrics::format3(t.rouge_l) + " | " +
         metrics::format3(t.lev_norm) + " |\n";
}

}  // namespace

metrics::MetricTriple score_texts(std::string_view prediction, std::string_view ground_truth,
                                  const metrics::TokenizationPolicy& policy) {
  const std::string pred = docmodel::canonicalize(prediction);
  const std::string ref = docmodel::canonicalize(ground_truth);
  const auto pt = metrics::tokenize(pred, policy);
  const auto rt = metrics::tokenize(ref, policy);
  return {metrics::bleu(pt, rt), metrics::rouge_l(pt, rt), metrics::levenshtein_norm(pred, ref)};
}

EvalRun run_eval(const CorpusManifest& manifest, const PredictionSet& predictions,
                 const metrics::TokenizationPolicy& policy, EvalCondition condition, unsigned jobs) {
  check_condition(manifest, condition);
  std::vector<const ManifestEntry*> scored;
  for (const auto& e : manifest.entries) {
    if (e.failed()) continue;
    if (!predictions.texts.contains(e.id)) {
      throw Error(ErrorCode::PreconditionFailed, "no prediction for sample " + e.id);
    }
    scored.push_back(&e);
  }
  if (scored.empty()) throw Error(ErrorCode::NoRecords, "manifest has no scorable samples");

  std::vector<std::string> truths;
  truths.reserve(scored.size());
  for (const ManifestEntry* e : scored) truths.push_back(read_text_file(manifest.resolve(e->gt_path)));

  EvalRun run;
  run.records.resize(scored.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < scored.size();) {
      try {
        const ManifestEntry& e = *scored[i];
        run.records[i] = {e.id, e.category, score_texts(predictions.texts.at(e.id), truths[i], policy)};
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < std::min<std::size_t>(jobs, scored.size()); ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (fatal) std::rethrow_exception(fatal);

  run.report.metrics = metrics::aggregate_report(run.records, policy);
  ReportContext& ctx = run.report.context;
  ctx.condition = std::string(to_string(condition));
  ctx.config_fingerprint = manifest.config_fingerprint;
  ctx.scored = scored.size();
  ctx.failed_samples = manifest.failed_count();
  ctx.missing_predictions = predictions.count(PredictionFlag::missing);
  ctx.malformed_responses = predictions.count(PredictionFlag::malformed_response);
  ctx.request_failures = predictions.count(PredictionFlag::request_failed);
  return run;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  const auto& m = report.metrics;
  const auto& ctx = report.context;
  if (m.per_category.empty()) throw Error(ErrorCode::NoRecords, "report has no categories");
  if (format == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["condition"] = ctx.condition;
    j["tokenization"] = metrics::describe(m.policy);
    j["bleu_method"] = kBleuMethod;
    j["levenshtein_method"] = kLevenshteinMethod;
    j["config_fingerprint"] = ctx.config_fingerprint;
    j["per_category"] = nlohmann::ordered_json::array();
    for (const auto& c : m.per_category) {
      j["per_category"].push_back({{"category", c.category},
                                   {"count", c.count},
                                   {"bleu", c.mean.bleu},
                                   {"rouge_l", c.mean.rouge_l},
                                   {"lev_norm", c.mean.lev_norm}});
    }
    j["overall"] = {{"bleu", m.overall.bleu}, {"rouge_l", m.overall.rouge_l}, {"lev_norm", m.overall.lev_norm}};
    j["counts"] = {{"scored", ctx.scored},
                   {"failed_samples", ctx.failed_samples},
                   {"missing_predictions", ctx.missing_predictions},
                   {"malformed_responses", ctx.malformed_responses},
                   {"request_failures", ctx.request_failures}};
    return j.dump(2) + "\n";
  }

  std::string out = "# Evaluation report\n\n";
  out += "- condition: " + ctx.condition + "\n";
  out += "- tokenization: " + metrics::describe(m.policy) + "\n";
  out += "- BLEU: " + std::string(kBleuMethod) + "\n";
  out += "- Levenshtein: " + std::string(kLevenshteinMethod) + "\n";
  out += "- config fingerprint: " + (ctx.config_fingerprint.empty() ? std::string("n/a") : ctx.config_fingerprint) + "\n\n";
  out += "| Category | BLEU ↑ | ROUGE-L ↑ | Levenshtein ↓ |\n";
  out += "|---|---|---|---|\n";
  for (const auto& c : m.per_category) out += row(c.category, c.mean);
  out += row("Average", m.overall);
  out += "\nScored samples: " + std::to_string(ctx.scored) + ". Failed generation entries (not scored): " +
         std::to_string(ctx.failed_samples) + ". Missing predictions (scored as empty): " +
         std::to_string(ctx.missing_predictions) + ". Malformed responses: " + std::to_string(ctx.malformed_responses) +
         ". Failed requests: " + std::to_string(ctx.request_failures) + ".\n";
  return out;
}

EvalReport report_from_json(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    EvalReport r;
    r.context.condition = j.at("condition").get<std::string>();
    r.context.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    r.metrics.policy = metrics::policy_from_string(j.at("tokenization").get<std::string>());
    for (const auto& c : j.at("per_category")) {
      r.metrics.per_category.push_back({c.at("category").get<std::string>(), triple_from(c), c.at("count").get<std::size_t>()});
    }
    r.metrics.overall = triple_from(j.at("overall"));
    const json& counts = j.at("counts");
    r.context.scored = counts.at("scored").get<std::size_t>();
    r.context.failed_samples = counts.at("failed_samples").get<std::size_t>();
    r.context.missing_predictions = counts.at("missing_predictions").get<std::size_t>();
    r.context.malformed_responses = counts.at("malformed_responses").get<std::size_t>();
    r.context.request_failures = counts.at("request_failures").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("report JSON: ") + e.what());
  }
}

std::string scores_to_jsonl(const std::vector<metrics::MetricRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j{{"sample_id", r.sample_id}, {"category", r.category}, {"bleu", r.scores.bleu},
                             {"rouge_l", r.scores.rouge_l}, {"lev_norm", r.scores.lev_norm}};
    out += j.dump(-1, ' ', false, json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<metrics::MetricRecord> scores_from_jsonl(std::string_view text) {
  std::vector<metrics::MetricRecord> out;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json j = json::parse(line);
      out.push_back({j.at("sample_id").get<std::string>(), j.at("category").get<std::string>(), triple_from(j)});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedManifestLine, "scores line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace docforge::eval
