#include "docforge/synth/assets.hpp"

#include <sstream>

#include <json.hpp>

#include "docforge/core/error.hpp"
#include "docforge/core/io.hpp"
#include "docforge/core/rng.hpp"
#include "docforge/core/unicode.hpp"

namespace docforge::synth {

namespace {

std::string checked_text(std::string text, const std::string& what) {
  if (!unicode::is_valid_utf8(text)) throw Error(ErrorCode::InvalidSpec, what + " is not valid UTF-8");
  text = unicode::to_nfc(text);
  bool blank = true;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (cp == U'\n' || unicode::is_control(cp)) {
      throw Error(ErrorCode::InvalidSpec, what + " contains a line break or control character");
    }
    blank = blank && unicode::is_whitespace(cp);
  }
  if (blank) throw Error(ErrorCode::InvalidSpec, what + " is empty");
  return text;
}

}  // namespace

std::string_view to_string(AssetKind kind) noexcept {
  switch (kind) {
    case AssetKind::photo: return "photo";
    case AssetKind::chart: return "chart";
    case AssetKind::equation: return "equation";
  }
  return "photo";
}

AssetKind asset_kind_from_string(std::string_view name) {
  if (name == "photo") return AssetKind::photo;
  if (name == "chart") return AssetKind::chart;
  if (name == "equation") return AssetKind::equation;
  throw Error(ErrorCode::InvalidSpec, "unknown asset kind '" + std::string(name) + "'");
}

AssetPool load_asset_pool(const std::filesystem::path& index_path) {
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(read_text_file(index_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, index_path.string() + ": " + e.what());
  }
  const std::filesystem::path base = index_path.parent_path();
  AssetPool pool;
  try {
    for (const auto& item : index.value("images", nlohmann::json::array())) {
      ImageAsset asset;
      const std::filesystem::path path = base / item.at("path").get<std::string>();
      asset.path = path.string();
      asset.kind = asset_kind_from_string(item.at("kind").get<std::string>());
      if (asset.kind == AssetKind::equation) throw Error(ErrorCode::InvalidSpec, "image asset with kind equation");
      asset.description = checked_text(item.at("description").get<std::string>(), "description of " + asset.path);
      const std::vector<std::uint8_t> bytes = read_binary_file(path);
      try {
        asset.raster = std::make_shared<const Image>(decode_png(bytes));
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidSpec, "cannot decode " + asset.path + ": " + e.what());
      }
      pool.images.push_back(std::move(asset));
    }
    if (index.contains("equations")) {
      const auto& eq = index.at("equations");
      std::vector<std::string> sources;
      if (eq.is_string()) {
        std::istringstream in(read_text_file(base / eq.get<std::string>()));
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty() && line.front() != '#') sources.push_back(line);
        }
      } else {
        sources = eq.get<std::vector<std::string>>();
      }
      for (auto& source : sources) {
        std::string text = checked_text(std::move(source), "equation source");
        if (text.find("$$") != std::string::npos) throw Error(ErrorCode::InvalidSpec, "equation source contains $$");
        pool.equations.push_back(std::move(text));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, index_path.string() + ": " + e.what());
  }
  return pool;
}

std::size_t count_of(const AssetPool& pool, AssetKind kind) noexcept {
  if (kind == AssetKind::equation) return pool.equations.size();
  std::size_t n = 0;
  for (const auto& image : pool.images) n += image.kind == kind ? 1 : 0;
  return n;
}

SampledAsset sample_asset(const AssetPool& pool, AssetKind kind, std::uint64_t seed) {
  const std::size_t n = count_of(pool, kind);
  if (n == 0) throw Error(ErrorCode::EmptyPoolForKind, "asset pool has no " + std::string(to_string(kind)));
  Rng rng(seed);
  const std::size_t pick = rng.below(n);
  SampledAsset out;
  out.kind = kind;
  out.index = pick;
  if (kind == AssetKind::equation) {
    out.payload = pool.equations[pick];
    return out;
  }
  std::size_t seen = 0;
  for (const auto& image : pool.images) {
    if (image.kind != kind) continue;
    if (seen++ == pick) {
      out.payload = image.description;
      out.raster = image.raster;
      break;
    }
  }
  return out;
}

}  // namespace docforge::synth
