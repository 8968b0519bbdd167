#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "docforge/core/image.hpp"

namespace docforge::synth {

enum class AssetKind { photo, chart, equation };

std::string_view to_string(AssetKind kind) noexcept;
AssetKind asset_kind_from_string(std::string_view name);

struct ImageAsset {
  std::string path;
  std::string description;
  AssetKind kind = AssetKind::photo;  // photo or chart
  std::shared_ptr<const Image> raster;
};

struct AssetPool {
  std::vector<ImageAsset> images;
  std::vector<std::string> equations;
};

/// Reads a pool index:
///   {"images": [{"path": ..., "kind": "photo"|"chart", "description": ...}],
///    "equations": "file.txt" | ["source", ...]}
/// Relative paths resolve against the index file's directory; an equation
/// file holds one source per line. Every raster is decoded up front.
/// Errors: IoFailure, InvalidSpec (empty description/source, bad kind,
/// undecodable raster).
AssetPool load_asset_pool(const std::filesystem::path& index_path);

/// Asset with its ground-truth payload: the description for images, the
/// source for equations (raster is null then).
struct SampledAsset {
  AssetKind kind = AssetKind::photo;
  std::string payload;
  std::shared_ptr<const Image> raster;
  std::size_t index = 0;  // position within its kind
};

/// Uniform draw among entries of `kind` using Rng(seed).below(n).
/// Throws EmptyPoolForKind.
SampledAsset sample_asset(const AssetPool& pool, AssetKind kind, std::uint64_t seed);

/// Number of entries of `kind`.
std::size_t count_of(const AssetPool& pool, AssetKind kind) noexcept;

}  // namespace docforge::synth
