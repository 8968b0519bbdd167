#include "docforge/core/manifest.hpp"

#include <json.hpp>
#include <unordered_set>

#include "docforge/core/error.hpp"

namespace docforge {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void malformed(std::size_t line_number, const std::string& what) {
  throw Error(ErrorCode::MalformedManifestLine, "line " + std::to_string(line_number) + ": " + what);
}

std::string string_field(const nlohmann::json& obj, const char* key, std::size_t line_number, bool required) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) malformed(line_number, std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) malformed(line_number, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

std::filesystem::path CorpusManifest::resolve(const std::string& relative) const {
  const std::filesystem::path p(relative);
  return p.is_absolute() ? p : base_dir / p;
}

std::size_t CorpusManifest::failed_count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.failed() ? 1 : 0;
  return n;
}

std::string to_json_line(const ManifestEntry& entry) {
  ordered_json j;
  j["id"] = entry.id;
  j["image_path"] = entry.image_path;
  j["gt_path"] = entry.gt_path;
  j["mode"] = entry.mode;
  j["category"] = entry.category;
  j["language"] = entry.language;
  j["seed"] = entry.seed;
  j["status"] = entry.status;
  j["config_fingerprint"] = entry.config_fingerprint;
  if (entry.anchor_text) j["anchor_text"] = *entry.anchor_text;
  if (!entry.error.empty()) j["error"] = entry.error;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ManifestEntry parse_manifest_line(std::string_view line, std::size_t line_number) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    malformed(line_number, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) malformed(line_number, "not a JSON object");

  ManifestEntry entry;
  entry.id = string_field(obj, "id", line_number, true);
  entry.image_path = string_field(obj, "image_path", line_number, true);
  entry.gt_path = string_field(obj, "gt_path", line_number, true);
  entry.category = string_field(obj, "category", line_number, true);
  entry.status = string_field(obj, "status", line_number, true);
  if (entry.id.empty()) malformed(line_number, "empty id");
  if (entry.status != "ok" && entry.status != "failed") malformed(line_number, "unknown status '" + entry.status + "'");
  if (obj.contains("mode")) entry.mode = string_field(obj, "mode", line_number, false);
  entry.language = string_field(obj, "language", line_number, false);
  entry.config_fingerprint = string_field(obj, "config_fingerprint", line_number, false);
  entry.error = string_field(obj, "error", line_number, false);
  if (const auto it = obj.find("anchor_text"); it != obj.end() && !it->is_null()) {
    entry.anchor_text = string_field(obj, "anchor_text", line_number, false);
  }
  if (const auto it = obj.find("seed"); it != obj.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      malformed(line_number, "seed is not a non-negative integer");
    }
    entry.seed = it->get<std::uint64_t>();
  }
  return entry;
}

CorpusManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  CorpusManifest manifest;
  manifest.base_dir = base_dir;
  std::unordered_set<std::string> seen;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    ManifestEntry entry = parse_manifest_line(line, line_number);
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorCode::DuplicateId, "id '" + entry.id + "' repeated on line " + std::to_string(line_number));
    }
    if (manifest.config_fingerprint.empty()) manifest.config_fingerprint = entry.config_fingerprint;
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

std::string serialize_manifest(const CorpusManifest& manifest) {
  std::string out;
  for (const auto& entry : manifest.entries) {
    out += to_json_line(entry);
    out += '\n';
  }
  return out;
}

}  // namespace docforge
