#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docforge {

/// One line of manifest.jsonl. Paths are relative to the manifest's
/// directory unless absolute.
struct ManifestEntry {
  std::string id;
  std::string image_path;
  std::string gt_path;
  std::string mode = "structure";  // supervision mode of the ground truth
  std::string category;
  std::string language;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "failed"
  std::string config_fingerprint;
  std::optional<std::string> anchor_text;
  std::string error;  // failed entries only

  bool failed() const noexcept { return status != "ok"; }
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;  // sample-index order
  std::string config_fingerprint;
  std::filesystem::path base_dir;  // directory holding manifest.jsonl

  std::filesystem::path resolve(const std::string& relative) const;
  std::size_t failed_count() const noexcept;
};

/// Compact JSON object with keys in a fixed order, no trailing newline.
std::string to_json_line(const ManifestEntry& entry);

/// Requires id, image_path, gt_path, category and status; other fields
/// default. Throws MalformedManifestLine naming `line_number`.
ManifestEntry parse_manifest_line(std::string_view line, std::size_t line_number);

/// Parses a whole JSON-lines document; blank lines are skipped. Throws
/// MalformedManifestLine or DuplicateId.
CorpusManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});

std::string serialize_manifest(const CorpusManifest& manifest);

}  // namespace docforge
