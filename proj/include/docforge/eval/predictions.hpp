#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docforge/core/manifest.hpp"

namespace docforge::eval {

/// with_metadata: the endpoint also receives the sample's anchor text.
/// image_only: the page image and the prompt only.
enum class EvalCondition { with_metadata, image_only };

std::string_view to_string(EvalCondition condition) noexcept;
EvalCondition condition_from_string(std::string_view name);

/// Reads manifest.jsonl; paths resolve against its directory.
/// Errors: IoFailure, MalformedManifestLine, DuplicateId.
CorpusManifest load_manifest(const std::filesystem::path& path);

/// Throws PreconditionFailed when `condition` is with_metadata and a scored
/// (non-failed) entry has no anchor text.
void check_condition(const CorpusManifest& manifest, EvalCondition condition);

enum class Provenance { file, endpoint };

enum class PredictionFlag {
  missing,             // no prediction file
  malformed_response,  // endpoint answered with an unreadable body
  request_failed,      // endpoint kept failing or rejected the request
};

std::string_view to_string(PredictionFlag flag) noexcept;

struct PredictionSet {
  Provenance provenance = Provenance::file;
  std::string source;  // directory or endpoint URL
  std::map<std::string, std::string> texts;  // one per scored sample id
  std::map<std::string, PredictionFlag> flags;

  std::size_t count(PredictionFlag flag) const noexcept;
};

/// Reads `<dir>/<id>.pred.txt` verbatim for every non-failed entry. A
/// missing file gives "" and the `missing` flag.
PredictionSet fetch_file_predictions(const CorpusManifest& manifest, const std::filesystem::path& dir);

struct HttpRequest {
  std::string url;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
  double timeout_s = 60.0;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  bool connection_error = false;  // nothing was received
  std::string error;
};

using Transport = std::function<HttpResponse(const HttpRequest&)>;

/// cpp-httplib client; one connection per request. Safe to call from
/// several threads.
Transport http_transport();

struct EndpointConfig {
  std::string url;  // http(s)://host[:port]/path
  std::string model;
  std::string token_env = "DOCFORGE_API_TOKEN";  // Bearer token source; unset: no header
  double timeout_s = 120.0;
  int retries = 3;
  double backoff_s = 1.0;  // first retry delay, doubled on each further retry
  std::size_t window = 4;  // requests in flight
  std::size_t anchor_cap = 8000;  // grapheme clusters
};

/// Instruction prompt per supervision mode ("default", "structure").
using PromptSet = std::map<std::string, std::string>;

/// Reads default.txt and structure.txt from `dir`.
PromptSet load_prompts(const std::filesystem::path& dir);

/// JSON request body for one sample. The anchor_text field is present only
/// under with_metadata.
std::string build_request_body(const ManifestEntry& entry, std::string_view image_png_base64,
                               std::string_view prompt, const EndpointConfig& config, EvalCondition condition);

/// Accepts {"text": ...}, {"content": [{"type": "text", "text": ...}, ...]}
/// or {"choices": [{"message": {"content": ...}}]}. Throws MalformedResponse.
std::string parse_response_text(std::string_view body);

/// One request per non-failed entry, at most `window` in flight. Connection
/// errors, 429 and 5xx are retried with exponential backoff; connection
/// errors that outlast the retries throw EndpointUnreachable, other
/// persistent failures record "" with a flag.
PredictionSet fetch_endpoint_predictions(const CorpusManifest& manifest, const EndpointConfig& config,
                                         const PromptSet& prompts, EvalCondition condition,
                                         const Transport& transport = http_transport());

}  // namespace docforge::eval
