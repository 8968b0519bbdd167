#include "docforge/eval/predictions.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/curation/anchor.hpp"

namespace docforge::eval {

namespace {

using nlohmann::json;

bool is_transient(const HttpResponse& r) { return r.connection_error || r.status == 429 || r.status >= 500; }

}  // namespace

std::string_view to_string(EvalCondition condition) noexcept {
  return condition == EvalCondition::with_metadata ? "with_metadata" : "image_only";
}

EvalCondition condition_from_string(std::string_view name) {
  if (name == "with_metadata") return EvalCondition::with_metadata;
  if (name == "image_only") return EvalCondition::image_only;
  throw Error(ErrorCode::InvalidConfig, "unknown condition '" + std::string(name) + "'");
}

std::string_view to_string(PredictionFlag flag) noexcept {
  switch (flag) {
    case PredictionFlag::missing: return "missing";
    case PredictionFlag::malformed_response: return "malformed_response";
    case PredictionFlag::request_failed: return "request_failed";
  }
  return "unknown";
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path());
}

void check_condition(const CorpusManifest& manifest, EvalCondition condition) {
  if (condition != EvalCondition::with_metadata) return;
  for (const auto& e : manifest.entries) {
    if (!e.failed() && !e.anchor_text) {
      throw Error(ErrorCode::PreconditionFailed, "with_metadata needs anchor text; sample " + e.id + " has none");
    }
  }
}

std::size_t PredictionSet::count(PredictionFlag flag) const noexcept {
  std::size_t n = 0;
  for (const auto& [id, f] : flags) n += f == flag ? 1 : 0;
  return n;
}

PredictionSet fetch_file_predictions(const CorpusManifest& manifest, const std::filesystem::path& dir) {
  PredictionSet set;
  set.provenance = Provenance::file;
  set.source = dir.string();
  for (const auto& e : manifest.entries) {
    if (e.failed()) continue;
    const auto path = dir / (e.id + ".pred.txt");
    if (std::filesystem::is_regular_file(path)) {
      set.texts[e.id] = read_text_file(path);
    } else {
      set.texts[e.id] = "";
      set.flags[e.id] = PredictionFlag::missing;
    }
  }
  return set;
}

Transport http_transport() {
  return [](const HttpRequest& request) {
    HttpResponse out;
    const std::size_t scheme_end = request.url.find("://");
    const std::size_t path_start =
        request.url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = request.url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

    httplib::Client client(origin);
    if (!client.is_valid()) {
      out.connection_error = true;
      out.error = "unsupported endpoint URL " + request.url;
      return out;
    }
    const auto timeout = std::chrono::duration<double>(request.timeout_s);
    const auto secs = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    client.set_connection_timeout(secs);
    client.set_read_timeout(secs);
    client.set_write_timeout(secs);
    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);
    auto result = client.Post(path, headers, request.body, "application/json");
    if (!result) {
      out.connection_error = true;
      out.error = httplib::to_string(result.error());
      return out;
    }
    out.status = result->status;
    out.body = result->body;
    return out;
  };
}

PromptSet load_prompts(const std::filesystem::path& dir) {
  PromptSet prompts;
  for (const char* mode : {"default", "structure"}) prompts[mode] = read_text_file(dir / (std::string(mode) + ".txt"));
  return prompts;
}

std::string build_request_body(const ManifestEntry& entry, std::string_view image_png_base64,
                               std::string_view prompt, const EndpointConfig& config, EvalCondition condition) {
  nlohmann::ordered_json body;
  body["model"] = config.model;
  nlohmann::ordered_json image{{"type", "image"}, {"media_type", "image/png"}, {"data", image_png_base64}};
  nlohmann::ordered_json text{{"type", "text"}, {"text", prompt}};
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", nlohmann::ordered_json::array({image, text})}}});
  if (condition == EvalCondition::with_metadata) {
    body["anchor_text"] = curation::cap_anchor_text(entry.anchor_text.value_or(""), config.anchor_cap);
  }
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string parse_response_text(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("response is not JSON: ") + e.what());
  }
  if (doc.is_object()) {
    if (auto it = doc.find("text"); it != doc.end() && it->is_string()) return it->get<std::string>();
    if (auto it = doc.find("content"); it != doc.end() && it->is_array()) {
      std::string out;
      bool any = false;
      for (const auto& part : *it) {
        if (part.is_object() && part.value("type", "") == "text" && part.contains("text") && part["text"].is_string()) {
          out += part["text"].get<std::string>();
          any = true;
        }
      }
      if (any) return out;
    }
    if (auto it = doc.find("choices"); it != doc.end() && it->is_array() && !it->empty()) {
      const json& first = (*it)[0];
      if (first.contains("message") && first["message"].contains("content") &&
          first["message"]["content"].is_string()) {
        return first["message"]["content"].get<std::string>();
      }
    }
  }
  throw Error(ErrorCode::MalformedResponse, "no text field in response");
}

PredictionSet fetch_endpoint_predictions(const CorpusManifest& manifest, const EndpointConfig& config,
                                         const PromptSet& prompts, EvalCondition condition,
                                         const Transport& transport) {
  if (config.url.empty()) throw Error(ErrorCode::InvalidConfig, "endpoint URL is empty");
  if (config.retries < 0 || config.window == 0) throw Error(ErrorCode::InvalidConfig, "bad retry count or window");
  check_condition(manifest, condition);

  std::vector<const ManifestEntry*> todo;
  for (const auto& e : manifest.entries) {
    if (!e.failed()) todo.push_back(&e);
  }
  for (const ManifestEntry* e : todo) {
    if (!prompts.contains(e->mode)) throw Error(ErrorCode::InvalidConfig, "no prompt for mode " + e->mode);
  }

  std::vector<std::pair<std::string, std::string>> headers;
  if (const char* token = std::getenv(config.token_env.c_str()); token != nullptr && *token != '\0') {
    headers.emplace_back("Authorization", std::string("Bearer ") + token);
  }

  std::vector<std::string> texts(todo.size());
  std::vector<std::optional<PredictionFlag>> flags(todo.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const ManifestEntry& e = *todo[i];
      try {
        const auto png = read_binary_file(manifest.resolve(e.image_path));
        HttpRequest request{config.url,
                            build_request_body(e, base64_encode(png), prompts.at(e.mode), config, condition),
                            headers, config.timeout_s};
        HttpResponse response;
        for (int attempt = 0;; ++attempt) {
          response = transport(request);
          if (!is_transient(response) || attempt >= config.retries || abort.load()) break;
          std::this_thread::sleep_for(std::chrono::duration<double>(config.backoff_s * std::ldexp(1.0, attempt)));
        }
        if (response.connection_error) {
          throw Error(ErrorCode::EndpointUnreachable,
                      config.url + " after " + std::to_string(config.retries + 1) + " attempts: " + response.error);
        }
        if (response.status < 200 || response.status >= 300) {
          flags[i] = PredictionFlag::request_failed;
          continue;
        }
        try {
          texts[i] = parse_response_text(response.body);
        } catch (const Error&) {
          flags[i] = PredictionFlag::malformed_response;
        }
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        abort.store(true);
      }
    }
  };
  std::vector<std::thread> threads;
  const std::size_t n_threads = std::min(config.window, std::max<std::size_t>(todo.size(), 1));
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (fatal) std::rethrow_exception(fatal);

  PredictionSet set;
  set.provenance = Provenance::endpoint;
  set.source = config.url;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    set.texts[todo[i]->id] = std::move(texts[i]);
    if (flags[i]) set.flags[todo[i]->id] = *flags[i];
  }
  return set;
}

}  // namespace docforge::eval
