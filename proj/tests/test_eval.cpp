#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "docforge/core/image.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/manifest.hpp"
#include "docforge/eval/harness.hpp"
#include "docforge/eval/predictions.hpp"
#include "docforge/metrics/report.hpp"
#include "published_tables.hpp"
#include "support.hpp"

using namespace docforge;
using namespace docforge::eval;
using docforge::testing::code_of;
using json = nlohmann::json;

namespace {

/// Small on-disk corpus: ground truths, tiny PNGs and a manifest.
struct Fixture {
  testing::TempDir dir;
  CorpusManifest manifest;

  explicit Fixture(const std::string& name, const std::vector<std::pair<std::string, std::string>>& docs)
      : dir(name) {
    std::filesystem::create_directories(dir.path() / "gt");
    std::filesystem::create_directories(dir.path() / "images");
    const auto png = encode_png(Image(4, 4, {200, 200, 200}));
    for (std::size_t i = 0; i < docs.size(); ++i) {
      ManifestEntry e;
      e.id = "doc-" + std::to_string(i);
      e.image_path = "images/" + e.id + ".png";
      e.gt_path = "gt/" + e.id + ".gt.txt";
      e.category = docs[i].first;
      e.language = "thai";
      e.config_fingerprint = "fp";
      e.anchor_text = "anchor " + std::to_string(i);
      write_text_file(dir.path() / e.gt_path, docs[i].second);
      write_text_file(dir.path() / e.image_path,
                      std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
      manifest.entries.push_back(e);
    }
    manifest.base_dir = dir.path();
    manifest.config_fingerprint = "fp";
    write_text_file(dir.path() / "manifest.jsonl", serialize_manifest(manifest));
  }

  std::filesystem::path preds() const { return dir.path() / "preds"; }

  void write_prediction(const std::string& id, const std::string& text) const {
    std::filesystem::create_directories(preds());
    write_text_file(preds() / (id + ".pred.txt"), text);
  }
};

const std::vector<std::pair<std::string, std::string>>& sample_docs() {
  static const std::vector<std::pair<std::string, std::string>> d{
      {"Thai Books", "# บทที่ ๑\n\nการประชุมคณะกรรมการบริหาร"},
      {"Thai Books", "รายงานงบประมาณประจำปี"},
      {"Forms", "<table><tr><td>ชื่อ</td><td>สมชาย</td></tr></table>"},
  };
  return d;
}

PromptSet prompts() { return {{"default", "read the page"}, {"structure", "read the page with tables"}}; }

EndpointConfig endpoint() {
  EndpointConfig c;
  c.url = "http://127.0.0.1:1/v1/ocr";
  c.model = "test-model";
  c.backoff_s = 0.001;
  c.retries = 2;
  c.window = 2;
  return c;
}

}  // namespace

TEST_CASE("load_manifest examples") {
  Fixture f("manifest", sample_docs());
  const CorpusManifest m = load_manifest(f.dir.path() / "manifest.jsonl");
  CHECK(m.entries.size() == 3);
  CHECK(m.entries == f.manifest.entries);
  CHECK(m.base_dir == f.dir.path());

  std::string text = read_text_file(f.dir.path() / "manifest.jsonl");
  const std::string missing_gt = R"({"id":"x","image_path":"a.png","category":"c","status":"ok"})";
  write_text_file(f.dir.path() / "bad.jsonl", text + missing_gt + "\n");
  try {
    (void)load_manifest(f.dir.path() / "bad.jsonl");
    FAIL("expected MalformedManifestLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedManifestLine);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  const std::string first_line = text.substr(0, text.find('\n') + 1);
  write_text_file(f.dir.path() / "dup.jsonl", text + first_line);
  CHECK(code_of([&] { (void)load_manifest(f.dir.path() / "dup.jsonl"); }) == ErrorCode::DuplicateId);
  CHECK(code_of([&] { (void)load_manifest(f.dir.path() / "none.jsonl"); }) == ErrorCode::IoFailure);
}

TEST_CASE("conditions") {
  CHECK(condition_from_string("image_only") == EvalCondition::image_only);
  CHECK(condition_from_string(to_string(EvalCondition::with_metadata)) == EvalCondition::with_metadata);
  CHECK(code_of([] { (void)condition_from_string("pdf"); }) == ErrorCode::InvalidConfig);

  Fixture f("conditions", sample_docs());
  CorpusManifest m = f.manifest;
  check_condition(m, EvalCondition::with_metadata);
  m.entries[1].anchor_text.reset();
  CHECK(code_of([&] { check_condition(m, EvalCondition::with_metadata); }) == ErrorCode::PreconditionFailed);
  check_condition(m, EvalCondition::image_only);
  m.entries[1].status = "failed";
  check_condition(m, EvalCondition::with_metadata);
}

TEST_CASE("file predictions") {
  Fixture f("files", sample_docs());
  f.write_prediction("doc-0", "a");
  f.write_prediction("doc-2", "c\n");
  const PredictionSet set = fetch_file_predictions(f.manifest, f.preds());
  CHECK(set.provenance == Provenance::file);
  CHECK(set.texts.size() == 3);
  CHECK(set.texts.at("doc-0") == "a");
  CHECK(set.texts.at("doc-2") == "c\n");
  CHECK(set.texts.at("doc-1").empty());
  CHECK(set.flags.size() == 1);
  CHECK(set.flags.at("doc-1") == PredictionFlag::missing);
  CHECK(set.count(PredictionFlag::missing) == 1);

  CorpusManifest with_failed = f.manifest;
  with_failed.entries[0].status = "failed";
  CHECK(fetch_file_predictions(with_failed, f.preds()).texts.size() == 2);
}

TEST_CASE("request payload follows the condition") {
  Fixture f("payload", sample_docs());
  std::mutex mutex;
  std::vector<HttpRequest> seen;
  const Transport capture = [&](const HttpRequest& r) {
    std::lock_guard lock(mutex);
    seen.push_back(r);
    return HttpResponse{200, R"({"text":"ok"})", false, ""};
  };

  const PredictionSet image_only =
      fetch_endpoint_predictions(f.manifest, endpoint(), prompts(), EvalCondition::image_only, capture);
  REQUIRE(seen.size() == 3);
  for (const auto& r : seen) {
    const json body = json::parse(r.body);
    CHECK_FALSE(body.contains("anchor_text"));
    CHECK(r.body.find("anchor ") == std::string::npos);
    CHECK(body["model"] == "test-model");
    const auto& content = body["messages"][0]["content"];
    CHECK(content[0]["type"] == "image");
    CHECK(content[0]["media_type"] == "image/png");
    CHECK(content[1]["text"] == "read the page with tables");
    CHECK(r.url == endpoint().url);
  }
  CHECK(image_only.provenance == Provenance::endpoint);
  CHECK(image_only.texts.at("doc-1") == "ok");
  CHECK(image_only.flags.empty());

  seen.clear();
  (void)fetch_endpoint_predictions(f.manifest, endpoint(), prompts(), EvalCondition::with_metadata, capture);
  REQUIRE(seen.size() == 3);
  std::set<std::string> anchors;
  for (const auto& r : seen) anchors.insert(json::parse(r.body).at("anchor_text").get<std::string>());
  CHECK(anchors == std::set<std::string>{"anchor 0", "anchor 1", "anchor 2"});

  // The anchor is capped in grapheme clusters.
  EndpointConfig capped = endpoint();
  capped.anchor_cap = 3;
  const std::string body = build_request_body(f.manifest.entries[0], "QUJD", "p", capped, EvalCondition::with_metadata);
  CHECK(json::parse(body)["anchor_text"] == "anc");
  CHECK(json::parse(body)["messages"][0]["content"][0]["data"] == "QUJD");
}

TEST_CASE("bearer token comes from the environment") {
  Fixture f("token", {{"c", "x"}});
  EndpointConfig c = endpoint();
  c.token_env = "DOCFORGE_TEST_TOKEN_VAR";
  ::setenv("DOCFORGE_TEST_TOKEN_VAR", "s3cret", 1);
  std::string auth;
  (void)fetch_endpoint_predictions(f.manifest, c, prompts(), EvalCondition::image_only, [&](const HttpRequest& r) {
    for (const auto& [k, v] : r.headers) {
      if (k == "Authorization") auth = v;
    }
    return HttpResponse{200, R"({"text":""})", false, ""};
  });
  ::unsetenv("DOCFORGE_TEST_TOKEN_VAR");
  CHECK(auth == "Bearer s3cret");
}

TEST_CASE("endpoint failures") {
  Fixture f("failures", sample_docs());
  std::atomic<int> calls{0};
  const Transport flaky = [&](const HttpRequest&) {
    return ++calls % 2 == 1 ? HttpResponse{503, "busy", false, ""} : HttpResponse{200, R"({"text":"t"})", false, ""};
  };
  EndpointConfig one = endpoint();
  one.window = 1;
  const PredictionSet retried = fetch_endpoint_predictions(f.manifest, one, prompts(), EvalCondition::image_only, flaky);
  CHECK(retried.flags.empty());
  CHECK(calls.load() == 6);

  const Transport down = [](const HttpRequest&) { return HttpResponse{0, "", true, "refused"}; };
  CHECK(code_of([&] {
          (void)fetch_endpoint_predictions(f.manifest, endpoint(), prompts(), EvalCondition::image_only, down);
        }) == ErrorCode::EndpointUnreachable);

  const Transport rejecting = [](const HttpRequest&) { return HttpResponse{400, "bad", false, ""}; };
  const PredictionSet rejected =
      fetch_endpoint_predictions(f.manifest, endpoint(), prompts(), EvalCondition::image_only, rejecting);
  CHECK(rejected.count(PredictionFlag::request_failed) == 3);
  CHECK(rejected.texts.at("doc-0").empty());

  const Transport garbled = [](const HttpRequest&) { return HttpResponse{200, "<html>", false, ""}; };
  const PredictionSet malformed =
      fetch_endpoint_predictions(f.manifest, endpoint(), prompts(), EvalCondition::image_only, garbled);
  CHECK(malformed.count(PredictionFlag::malformed_response) == 3);
}

TEST_CASE("response parsing") {
  CHECK(parse_response_text(R"({"text":"a"})") == "a");
  CHECK(parse_response_text(R"({"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}]})") == "ab");
  CHECK(parse_response_text(R"({"choices":[{"message":{"content":"c"}}]})") == "c");
  CHECK(code_of([] { (void)parse_response_text("{}"); }) == ErrorCode::MalformedResponse);
  CHECK(code_of([] { (void)parse_response_text("not json"); }) == ErrorCode::MalformedResponse);
  CHECK(code_of([] { (void)parse_response_text(R"({"text":5})"); }) == ErrorCode::MalformedResponse);
}

TEST_CASE("http transport against a local server") {
  httplib::Server server;
  std::string received_auth;
  server.Post("/v1/ocr", [&](const httplib::Request& req, httplib::Response& res) {
    received_auth = req.get_header_value("Authorization");
    const json body = json::parse(req.body);
    res.set_content(json{{"text", "echo " + body["model"].get<std::string>()}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  Fixture f("http", {{"c", "x"}});
  EndpointConfig c = endpoint();
  c.url = "http://127.0.0.1:" + std::to_string(port) + "/v1/ocr";
  const PredictionSet set = fetch_endpoint_predictions(f.manifest, c, prompts(), EvalCondition::image_only);
  server.stop();
  thread.join();
  CHECK(set.texts.at("doc-0") == "echo test-model");

  const HttpResponse refused = http_transport()({"http://127.0.0.1:1/x", "{}", {}, 2.0});
  CHECK(refused.connection_error);
}

TEST_CASE("run_eval examples") {
  Fixture f("run", sample_docs());
  PredictionSet identity;
  for (const auto& e : f.manifest.entries) identity.texts[e.id] = read_text_file(f.dir.path() / e.gt_path);
  for (EvalCondition c : {EvalCondition::image_only, EvalCondition::with_metadata}) {
    const EvalRun run = run_eval(f.manifest, identity, {}, c, 2);
    REQUIRE(run.records.size() == 3);
    for (const auto& r : run.records) CHECK(r.scores == metrics::MetricTriple{1.0, 1.0, 0.0});
    CHECK(run.report.metrics.overall == metrics::MetricTriple{1.0, 1.0, 0.0});
    CHECK(run.report.context.scored == 3);
    CHECK(run.report.context.condition == to_string(c));
    CHECK(run.report.context.config_fingerprint == "fp");
  }

  PredictionSet empty = identity;
  empty.texts["doc-1"] = "";
  empty.flags["doc-1"] = PredictionFlag::missing;
  const EvalRun run = run_eval(f.manifest, empty, {}, EvalCondition::image_only, 1);
  CHECK(run.records[1].sample_id == "doc-1");
  CHECK(run.records[1].scores == metrics::MetricTriple{0.0, 0.0, 1.0});
  CHECK(run.report.context.missing_predictions == 1);

  PredictionSet partial = identity;
  partial.texts.erase("doc-2");
  CHECK(code_of([&] { (void)run_eval(f.manifest, partial, {}, EvalCondition::image_only); }) ==
        ErrorCode::PreconditionFailed);

  CorpusManifest with_failed = f.manifest;
  with_failed.entries[2].status = "failed";
  const EvalRun skipped = run_eval(with_failed, identity, {}, EvalCondition::image_only);
  CHECK(skipped.records.size() == 2);
  CHECK(skipped.report.context.failed_samples == 1);

  // Scoring ignores CRLF and trailing whitespace.
  CHECK(score_texts("a b \r\nc", "a b\nc", {}) == metrics::MetricTriple{1.0, 1.0, 0.0});
}

TEST_CASE("render_report examples") {
  const std::vector<metrics::MetricRecord> books{{"b1", "Thai Books", {0.746, 0.949, 0.053}}};
  EvalReport single{metrics::aggregate_report(books), {"image_only", "fp", 1, 0, 0, 0, 0}};
  const std::string md = render_report(single, ReportFormat::markdown);
  CHECK(md.find("| Thai Books | 0.746 | 0.949 | 0.053 |") != std::string::npos);
  CHECK(md.find("| Average | 0.746 | 0.949 | 0.053 |") != std::string::npos);
  CHECK(md.find("script_aware") != std::string::npos);
  CHECK(md.find("image_only") != std::string::npos);
  CHECK(md.find("fp") != std::string::npos);

  const auto& bleu = testing::published_tables()[0].columns[3];
  const EvalReport table3{metrics::aggregate_report(testing::records_for("bleu", bleu.values)),
                          {"with_metadata", "fp", 6, 0, 0, 0, 0}};
  const std::string md3 = render_report(table3, ReportFormat::markdown);
  CHECK(md3.find("| Average | 0.644 |") != std::string::npos);

  // JSON keeps full precision and re-renders to the same Markdown.
  const std::string js = render_report(table3, ReportFormat::json);
  const EvalReport back = report_from_json(js);
  CHECK(back.context == table3.context);
  CHECK(back.metrics.overall == table3.metrics.overall);
  CHECK(back.metrics.policy == table3.metrics.policy);
  CHECK(render_report(back, ReportFormat::markdown) == md3);
  CHECK(json::parse(js)["overall"]["bleu"].get<double>() == table3.metrics.overall.bleu);
  CHECK(code_of([] { (void)report_from_json("{}"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("markdown cells are half-even roundings of the json values") {
  Rng rng(3);
  std::vector<metrics::MetricRecord> recs;
  for (int i = 0; i < 40; ++i) {
    recs.push_back({"s" + std::to_string(i), "cat" + std::to_string(i % 5),
                    {rng.uniform(), rng.uniform(), rng.uniform()}});
  }
  const EvalReport report{metrics::aggregate_report(recs), {"image_only", "", 40, 0, 0, 0, 0}};
  const std::string md = render_report(report, ReportFormat::markdown);
  const json js = json::parse(render_report(report, ReportFormat::json));
  for (const auto& row : js["per_category"]) {
    const std::string line = "| " + row["category"].get<std::string>() + " | " +
                             metrics::format3(row["bleu"].get<double>()) + " | " +
                             metrics::format3(row["rouge_l"].get<double>()) + " | " +
                             metrics::format3(row["lev_norm"].get<double>()) + " |";
    CHECK(md.find(line) != std::string::npos);
  }
}

TEST_CASE("scores.jsonl round trip") {
  const std::vector<metrics::MetricRecord> recs{{"a", "x", {0.1, 0.2, 0.3}}, {"b", "y", {1.0 / 3.0, 0.5, 0.0}}};
  const auto back = scores_from_jsonl(scores_to_jsonl(recs));
  REQUIRE(back.size() == 2);
  CHECK(back[1].sample_id == "b");
  CHECK(back[1].category == "y");
  CHECK(back[1].scores == recs[1].scores);
  CHECK(code_of([] { (void)scores_from_jsonl("{\"sample_id\":1}\n"); }) == ErrorCode::MalformedManifestLine);
}
